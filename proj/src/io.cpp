#include "monolab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace monolab {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write file: " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

void write_json(const std::string& path, const nlohmann::json& j) {
  atomic_write_text(path, j.dump(2) + "\n");
}

void write_field_csv(const std::string& path, const ScalarField& field) {
  std::string out = "x,y,value\n";
  const Grid& grid = *field.grid;
  for (int i = 0; i < grid.node_count(); ++i) {
    out += fmt_g17(grid.nodes(i, 0));
    out += ',';
    out += fmt_g17(grid.nodes(i, 1));
    out += ',';
    out += fmt_g17(field.values[i]);
    out += '\n';
  }
  atomic_write_text(path, out);
}

void write_rate_csv(const std::string& path, const RateStudy& study) {
  std::string out = "epsilon,area,h1,l2,boundary\n";
  for (size_t i = 0; i < study.epsilons.size(); ++i) {
    out += fmt_g17(study.epsilons[i]);
    out += ',';
    out += fmt_g17(study.areas[i]);
    out += ',';
    out += fmt_g17(study.h1_errors[i]);
    out += ',';
    out += fmt_g17(study.l2_errors[i]);
    out += ',';
    out += fmt_g17(study.boundary_errors[i]);
    out += '\n';
  }
  atomic_write_text(path, out);
}

void write_measurement_csv(const std::string& path, const MeasurementSet& ms, int experiment) {
  const Grid& grid = *ms.grid;
  const auto& exp = ms.experiments.at(experiment);
  // Loop-ordered trace back to nodal indexing once.
  Eigen::VectorXd nodal = Eigen::VectorXd::Zero(grid.node_count());
  for (size_t i = 0; i < grid.boundary_nodes.size(); ++i)
    nodal[grid.boundary_nodes[i]] = ms.w_trace[static_cast<int>(i)];

  std::string out = "node,x,y,w,g\n";
  for (size_t e = 0; e < grid.boundary_edges.size(); ++e) {
    const auto& edge = grid.boundary_edges[e];
    for (int side = 0; side < 2; ++side) {
      const int node = side == 0 ? edge.tail : edge.head;
      out += std::to_string(node);
      out += ',';
      out += fmt_g17(grid.nodes(node, 0));
      out += ',';
      out += fmt_g17(grid.nodes(node, 1));
      out += ',';
      out += fmt_g17(nodal[node]);
      out += ',';
      out += fmt_g17(exp.g.values(static_cast<int>(e), side));
      out += '\n';
    }
  }
  atomic_write_text(path, out);
}

void write_xy_dat(const std::string& path, const std::vector<double>& x,
                  const std::vector<double>& y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::InvalidInput, "plot columns have different lengths");
  std::string out;
  for (size_t i = 0; i < x.size(); ++i) {
    out += fmt_g17(x[i]);
    out += ' ';
    out += fmt_g17(y[i]);
    out += '\n';
  }
  atomic_write_text(path, out);
}

nlohmann::json grid_to_json(const Grid& grid) {
  nlohmann::json j;
  j["domain"] = {{"x0", grid.domain.x0}, {"x1", grid.domain.x1},
                 {"y0", grid.domain.y0}, {"y1", grid.domain.y1}};
  j["resolution"] = {{"nx", grid.nx}, {"ny", grid.ny}};
  j["nodes"] = nlohmann::json::array();
  for (int i = 0; i < grid.node_count(); ++i)
    j["nodes"].push_back({grid.nodes(i, 0), grid.nodes(i, 1)});
  j["elements"] = nlohmann::json::array();
  for (int e = 0; e < grid.element_count(); ++e)
    j["elements"].push_back({grid.elements(e, 0), grid.elements(e, 1), grid.elements(e, 2)});
  j["boundary_edges"] = nlohmann::json::array();
  for (const auto& edge : grid.boundary_edges)
    j["boundary_edges"].push_back({{"nodes", {edge.tail, edge.head}},
                                   {"normal", {edge.normal.x(), edge.normal.y()}}});
  return j;
}

}  // namespace monolab
