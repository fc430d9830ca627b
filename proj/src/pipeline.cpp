#include "monolab/pipeline.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>

namespace monolab {

namespace {

using nlohmann::json;

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("MONOLAB_LOG");
  if (env == nullptr) return LogLevel::Info;
  const std::string v(env);
  if (v == "quiet") return LogLevel::Quiet;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Info;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) std::cerr << "[monolab] " << msg << "\n";
}

int map_error(const Error& e, bool reconstructing) {
  switch (e.code()) {
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::SingularOperator:
    case ErrorCode::NumericalError:
      return kExitSolverFailure;
    case ErrorCode::Unlocatable:
      return kExitReconstructionFailure;
    case ErrorCode::IllConditioned:
      return reconstructing ? kExitReconstructionFailure : kExitSolverFailure;
    default:
      return kExitConfigError;
  }
}

json solve_summary(const SolveReport& report) {
  return {{"iterations", report.newton_iterations},
          {"residual", report.final_residual},
          {"energy", report.energy},
          {"min", report.solution.values.minCoeff()},
          {"max", report.solution.values.maxCoeff()}};
}

std::vector<double> boundary_arclength(const Grid& grid) {
  std::vector<double> s;
  s.reserve(grid.boundary_nodes.size());
  double acc = 0.0;
  for (const auto& edge : grid.boundary_edges) {
    s.push_back(acc);
    acc += edge.length;
  }
  return s;
}

ReconstructionOptions reconstruction_options(const Config& config) {
  ReconstructionOptions opts;
  opts.mode = config.experiments.mode == "known_epsilon" ? ReconstructionMode::KnownEpsilon
                                                         : ReconstructionMode::TwoLambda;
  if (config.experiments.lambdas.empty())
    throw Error(ErrorCode::InvalidInput, "experiments.lambdas must not be empty");
  opts.lambda = config.experiments.lambdas[0];
  if (opts.mode == ReconstructionMode::TwoLambda) {
    if (config.experiments.lambdas.size() < 2)
      throw Error(ErrorCode::InvalidInput, "two_lambda mode needs two entries in experiments.lambdas");
    opts.lambda_p = config.experiments.lambdas[1];
  }
  opts.noise_level = config.experiments.noise_level;
  opts.seed = config.experiments.noise_seed;
  return opts;
}

}  // namespace

ScalarField make_source_field(const Grid& grid, const Config::Source& source) {
  if (source.kind == "constant") return constant_field(grid, source.value);
  if (source.kind == "manufactured") {
    constexpr double pi = std::numbers::pi;
    return sample_nodal(grid, [](double x, double) {
      const double u = std::cos(pi * x) + 2.0;
      return pi * pi * std::cos(pi * x) + u * u * u;
    });
  }
  if (source.kind == "riccati") return riccati_background(grid, 0.5).f_field;
  throw Error(ErrorCode::InvalidInput, "unknown source kind: " + source.kind);
}

int cmd_forward(const Config& config, const std::string& out_dir) {
  const Grid grid = build_rectangle_mesh(config.domain, config.nx, config.ny);
  const ScalarField f = make_source_field(grid, config.source);
  validate_inclusions(grid.domain, config.inclusions);

  json report;
  report["config"] = resolved_config_json(config);

  log_info("forward: solving the unperturbed problem");
  const SolveReport base = solve_unperturbed(grid, f.values, config.solver);
  write_field_csv(out_dir + "/U.csv", base.solution);
  report["unperturbed"] = solve_summary(base);

  if (!config.inclusions.empty()) {
    log_info("forward: solving the perturbed problem");
    const SolveReport pert = solve_perturbed(grid, {f.values, config.inclusions}, config.solver);
    write_field_csv(out_dir + "/u_eps.csv", pert.solution);
    report["perturbed"] = solve_summary(pert);

    MeasurementSet ms{&grid,
                      boundary_trace(grid, pert.solution.values - base.solution.values),
                      {Experiment{0.0, 1, boundary_data_from_nodal(
                                              grid, Eigen::VectorXd::Zero(grid.node_count()))}},
                      0.0};
    write_measurement_csv(out_dir + "/w_trace.csv", ms, 0);
    std::vector<double> w(ms.w_trace.data(), ms.w_trace.data() + ms.w_trace.size());
    write_xy_dat(out_dir + "/w_trace.dat", boundary_arclength(grid), w);
  }

  write_json(out_dir + "/report.json", report);
  log_info("forward: report written to " + out_dir + "/report.json");
  return kExitOk;
}

int cmd_rates(const Config& config, const std::string& out_dir) {
  if (config.inclusions.empty())
    throw Error(ErrorCode::InvalidInput, "rates needs one inclusion template");
  if (config.experiments.epsilons.size() < 2)
    throw Error(ErrorCode::InvalidInput,
                "rates needs at least two epsilons in experiments.epsilons (three for a fit)");

  const Grid grid = build_rectangle_mesh(config.domain, config.nx, config.ny);
  const ScalarField f = make_source_field(grid, config.source);

  log_info("rates: sweeping " + std::to_string(config.experiments.epsilons.size()) + " epsilons");
  const RateStudy study = rate_study(grid, f.values, config.inclusions[0],
                                     config.experiments.epsilons, config.solver);

  write_rate_csv(out_dir + "/rates.csv", study);
  auto log10v = [](const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = std::log10(v[i]);
    return out;
  };
  write_xy_dat(out_dir + "/rate_h1_loglog.dat", log10v(study.areas), log10v(study.h1_errors));
  write_xy_dat(out_dir + "/rate_l2_loglog.dat", log10v(study.areas), log10v(study.l2_errors));
  write_xy_dat(out_dir + "/rate_boundary_loglog.dat", log10v(study.areas),
               log10v(study.boundary_errors));

  json report;
  report["config"] = resolved_config_json(config);
  report["slopes"] = {{"h1", study.slope_h1},
                      {"l2", study.slope_l2},
                      {"boundary", study.slope_boundary}};
  report["rows"] = json::array();
  for (size_t i = 0; i < study.epsilons.size(); ++i)
    report["rows"].push_back({{"epsilon", study.epsilons[i]},
                              {"area", study.areas[i]},
                              {"h1", study.h1_errors[i]},
                              {"l2", study.l2_errors[i]},
                              {"boundary", study.boundary_errors[i]}});
  write_json(out_dir + "/rates.json", report);
  log_info("rates: slopes h1 = " + std::to_string(study.slope_h1) +
           ", l2 = " + std::to_string(study.slope_l2) +
           ", boundary = " + std::to_string(study.slope_boundary));
  return kExitOk;
}

int cmd_polarization(const Config& config, const std::string& out_dir) {
  if (config.inclusions.empty())
    throw Error(ErrorCode::InvalidInput, "polarization needs one inclusion");

  const Grid grid = build_rectangle_mesh(config.domain, config.nx, config.ny);
  const PolarizationTensor t = polarization(grid, config.inclusions[0]);
  const Eigen::Vector2d ev = t.eigenvalues();

  json report;
  report["config"] = resolved_config_json(config);
  report["tensor"] = {{"m11", t.m(0, 0)},
                      {"m12", t.m(0, 1)},
                      {"m21", t.m(1, 0)},
                      {"m22", t.m(1, 1)}};
  report["eigenvalues"] = {ev[0], ev[1]};
  report["raw_asymmetry"] = t.raw_asymmetry;
  report["epsilon"] = t.epsilon;
  report["k"] = t.contrast_k;
  report["discrete_area"] = t.discrete_area;
  report["extrapolated"] = t.extrapolated;
  write_json(out_dir + "/polarization.json", report);
  log_info("polarization: m11 = " + std::to_string(t.m(0, 0)) +
           ", m22 = " + std::to_string(t.m(1, 1)));
  return kExitOk;
}

int cmd_reconstruct(const Config& config, const std::string& out_dir) {
  if (config.inclusions.size() != 1)
    throw Error(ErrorCode::InvalidInput,
                "reconstruct needs exactly one (true) inclusion for data synthesis");

  const Grid grid = build_rectangle_mesh(config.domain, config.nx, config.ny);
  const Inclusion truth = config.inclusions[0];
  const ReconstructionOptions opts = reconstruction_options(config);

  log_info("reconstruct: synthesizing boundary data and inverting");
  const ReconstructionOutcome outcome =
      reconstruct_single_inclusion(grid, truth, opts, config.solver);

  write_measurement_csv(out_dir + "/measurements_lambda.csv", outcome.ms_lambda, 0);
  if (opts.mode == ReconstructionMode::TwoLambda)
    write_measurement_csv(out_dir + "/measurements_lambda_p.csv", outcome.ms_lambda_p, 0);
  write_measurement_csv(out_dir + "/measurements_riccati.csv", outcome.ms_riccati, 0);
  {
    std::vector<double> w(outcome.ms_lambda.w_trace.data(),
                          outcome.ms_lambda.w_trace.data() + outcome.ms_lambda.w_trace.size());
    write_xy_dat(out_dir + "/w_trace_lambda.dat", boundary_arclength(grid), w);
  }

  json report;
  report["config"] = resolved_config_json(config);
  report["truth"] = {{"center", {truth.center.x(), truth.center.y()}},
                     {"epsilon", truth.epsilon},
                     {"k", truth.k},
                     {"shape", shape_name(truth.shape)}};
  report["center"] = {outcome.center.x(), outcome.center.y()};
  report["epsilon_hat"] = outcome.epsilon_hat;
  report["m11"] = outcome.m11;
  report["diagnostics"] = {
      {"mode", config.experiments.mode},
      {"gammas",
       {{"gamma1", outcome.gamma1},
        {"gamma2", outcome.gamma2},
        {"gamma1_p", outcome.gamma1p},
        {"gamma2_p", outcome.gamma2p},
        {"gamma_riccati", outcome.gamma_riccati}}},
      {"delta_center",
       {outcome.center.x() - truth.center.x(), outcome.center.y() - truth.center.y()}},
      {"epsilon_rel_error", outcome.epsilon_hat / truth.epsilon - 1.0},
      {"m11_implausible", outcome.m11_implausible},
      {"degraded_accuracy", outcome.degraded_accuracy},
      {"newton_iterations", outcome.total_newton_iterations}};
  write_json(out_dir + "/reconstruction.json", report);
  log_info("reconstruct: center (" + std::to_string(outcome.center.x()) + ", " +
           std::to_string(outcome.center.y()) + "), m11 = " + std::to_string(outcome.m11));
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Steady monodomain laboratory: forward solves, perturbation rate studies, "
               "polarization tensors and single-inclusion reconstruction"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_override, "output directory (overrides output.dir)");
  };
  CLI::App* forward = app.add_subcommand("forward", "solve the direct problem(s)");
  CLI::App* rates = app.add_subcommand("rates", "perturbation-norm rate study over epsilon");
  CLI::App* polarization = app.add_subcommand("polarization", "polarization tensor of an inclusion");
  CLI::App* reconstruct = app.add_subcommand("reconstruct", "localize an inclusion and recover M11");
  for (CLI::App* sub : {forward, rates, polarization, reconstruct}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  const bool reconstructing = reconstruct->parsed();
  try {
    const Config config = load_config(config_path);
    const std::string out_dir = out_override.empty() ? config.output_dir : out_override;
    if (forward->parsed()) return cmd_forward(config, out_dir);
    if (rates->parsed()) return cmd_rates(config, out_dir);
    if (polarization->parsed()) return cmd_polarization(config, out_dir);
    return cmd_reconstruct(config, out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return map_error(e, reconstructing);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  }
}

}  // namespace monolab
