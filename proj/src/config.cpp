#include "monolab/config.hpp"

#include <fstream>
#include <set>

namespace monolab {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.contains(it.key()))
      throw Error(ErrorCode::InvalidInput, "unknown config key: " + path + it.key());
}

double get_number(const json& obj, const std::string& path, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw Error(ErrorCode::InvalidInput, "config field " + path + key + " must be a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw Error(ErrorCode::InvalidInput, "config field " + path + key + " must be an integer");
  return obj[key].get<int>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string())
    throw Error(ErrorCode::InvalidInput, "config field " + path + key + " must be a string");
  return obj[key].get<std::string>();
}

}  // namespace

std::string shape_name(Shape shape) {
  switch (shape) {
    case Shape::Disk: return "disk";
    case Shape::Ellipse: return "ellipse";
    case Shape::Square: return "square";
  }
  return "disk";
}

Shape shape_from_name(const std::string& name) {
  if (name == "disk") return Shape::Disk;
  if (name == "ellipse") return Shape::Ellipse;
  if (name == "square") return Shape::Square;
  throw Error(ErrorCode::InvalidInput,
              "inclusion shape must be disk, ellipse or square (got \"" + name + "\")");
}

Config parse_config(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "config root must be an object");
  reject_unknown_keys(j, "",
                      {"domain", "mesh", "source", "inclusions", "solver", "experiments",
                       "output"});
  Config c;

  if (j.contains("domain")) {
    const auto& d = j["domain"];
    reject_unknown_keys(d, "domain.", {"x0", "x1", "y0", "y1"});
    c.domain.x0 = get_number(d, "domain.", "x0", 0.0);
    c.domain.x1 = get_number(d, "domain.", "x1", 1.0);
    c.domain.y0 = get_number(d, "domain.", "y0", 0.0);
    c.domain.y1 = get_number(d, "domain.", "y1", 1.0);
    if (!(c.domain.width() > 0.0) || !(c.domain.height() > 0.0))
      throw Error(ErrorCode::InvalidInput, "config field domain is a degenerate rectangle");
  }

  if (j.contains("mesh")) {
    const auto& m = j["mesh"];
    reject_unknown_keys(m, "mesh.", {"nx", "ny"});
    c.nx = get_int(m, "mesh.", "nx", 64);
    c.ny = get_int(m, "mesh.", "ny", 64);
    if (c.nx < 2 || c.ny < 2)
      throw Error(ErrorCode::InvalidInput, "config fields mesh.nx and mesh.ny must be >= 2");
  }

  if (j.contains("source")) {
    const auto& s = j["source"];
    reject_unknown_keys(s, "source.", {"kind", "value"});
    c.source.kind = get_string(s, "source.", "kind", "constant");
    if (c.source.kind != "constant" && c.source.kind != "manufactured" &&
        c.source.kind != "riccati")
      throw Error(ErrorCode::InvalidInput,
                  "config field source.kind must be constant, manufactured or riccati");
    c.source.value = get_number(s, "source.", "value", 1.0);
  }

  if (j.contains("inclusions")) {
    if (!j["inclusions"].is_array())
      throw Error(ErrorCode::InvalidInput, "config field inclusions must be an array");
    int idx = 0;
    for (const auto& item : j["inclusions"]) {
      const std::string path = "inclusions[" + std::to_string(idx) + "].";
      reject_unknown_keys(item, path, {"shape", "center", "epsilon", "k"});
      Inclusion inc;
      inc.shape = shape_from_name(get_string(item, path, "shape", "disk"));
      if (item.contains("center")) {
        const auto& ctr = item["center"];
        if (!ctr.is_array() || ctr.size() != 2 || !ctr[0].is_number() || !ctr[1].is_number())
          throw Error(ErrorCode::InvalidInput,
                      "config field " + path + "center must be [x, y]");
        inc.center = {ctr[0].get<double>(), ctr[1].get<double>()};
      }
      inc.epsilon = get_number(item, path, "epsilon", 0.05);
      inc.k = get_number(item, path, "k", 0.5);
      if (!(inc.epsilon > 0.0))
        throw Error(ErrorCode::InvalidInput, "config field " + path + "epsilon must be positive");
      if (!(inc.k > 0.0) || inc.k > 1.0)
        throw Error(ErrorCode::InvalidInput,
                    "config field " + path + "k must lie in (0, 1]");
      c.inclusions.push_back(inc);
      ++idx;
    }
  }

  if (j.contains("solver")) {
    const auto& s = j["solver"];
    reject_unknown_keys(s, "solver.", {"tol", "max_iter"});
    c.solver.tol = get_number(s, "solver.", "tol", 1e-10);
    c.solver.max_iter = get_int(s, "solver.", "max_iter", 50);
    if (!(c.solver.tol > 0.0) || c.solver.max_iter < 1)
      throw Error(ErrorCode::InvalidInput, "config field solver has nonpositive controls");
  }

  if (j.contains("experiments")) {
    const auto& e = j["experiments"];
    reject_unknown_keys(e, "experiments.", {"lambdas", "mode", "noise", "epsilons"});
    if (e.contains("lambdas")) {
      c.experiments.lambdas.clear();
      for (const auto& v : e["lambdas"]) {
        if (!v.is_number() || !(v.get<double>() > 0.0))
          throw Error(ErrorCode::InvalidInput,
                      "config field experiments.lambdas must be positive numbers");
        c.experiments.lambdas.push_back(v.get<double>());
      }
    }
    c.experiments.mode = get_string(e, "experiments.", "mode", "two_lambda");
    if (c.experiments.mode != "two_lambda" && c.experiments.mode != "known_epsilon")
      throw Error(ErrorCode::InvalidInput,
                  "config field experiments.mode must be two_lambda or known_epsilon");
    if (e.contains("noise")) {
      const auto& n = e["noise"];
      reject_unknown_keys(n, "experiments.noise.", {"level", "seed"});
      c.experiments.noise_level = get_number(n, "experiments.noise.", "level", 0.0);
      if (c.experiments.noise_level < 0.0)
        throw Error(ErrorCode::InvalidInput,
                    "config field experiments.noise.level must be nonnegative");
      if (n.contains("seed")) {
        if (!n["seed"].is_number_unsigned() && !n["seed"].is_number_integer())
          throw Error(ErrorCode::InvalidInput,
                      "config field experiments.noise.seed must be an integer");
        c.experiments.noise_seed = n["seed"].get<std::uint64_t>();
      }
    }
    if (e.contains("epsilons")) {
      c.experiments.epsilons.clear();
      for (const auto& v : e["epsilons"]) {
        if (!v.is_number() || !(v.get<double>() > 0.0))
          throw Error(ErrorCode::InvalidInput,
                      "config field experiments.epsilons must be positive numbers");
        c.experiments.epsilons.push_back(v.get<double>());
      }
    }
  }

  if (j.contains("output")) {
    const auto& o = j["output"];
    reject_unknown_keys(o, "output.", {"dir"});
    c.output_dir = get_string(o, "output.", "dir", "out");
  }

  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

nlohmann::json resolved_config_json(const Config& c) {
  json j;
  j["domain"] = {{"x0", c.domain.x0}, {"x1", c.domain.x1}, {"y0", c.domain.y0}, {"y1", c.domain.y1}};
  j["mesh"] = {{"nx", c.nx}, {"ny", c.ny}};
  j["source"] = {{"kind", c.source.kind}, {"value", c.source.value}};
  j["inclusions"] = json::array();
  for (const auto& inc : c.inclusions)
    j["inclusions"].push_back({{"shape", shape_name(inc.shape)},
                               {"center", {inc.center.x(), inc.center.y()}},
                               {"epsilon", inc.epsilon},
                               {"k", inc.k}});
  j["solver"] = {{"tol", c.solver.tol}, {"max_iter", c.solver.max_iter}};
  j["experiments"] = {{"lambdas", c.experiments.lambdas},
                      {"mode", c.experiments.mode},
                      {"noise", {{"level", c.experiments.noise_level},
                                 {"seed", c.experiments.noise_seed}}},
                      {"epsilons", c.experiments.epsilons}};
  j["output"] = {{"dir", c.output_dir}};
  return j;
}

}  // namespace monolab
