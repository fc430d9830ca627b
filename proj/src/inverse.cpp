#include "monolab/inverse.hpp"

#include <cmath>
#include <numbers>

namespace monolab {

namespace {
constexpr double kSqrt3 = std::numbers::sqrt3;
}

double average_measurement(const MeasurementSet& ms, int experiment) {
  if (ms.grid == nullptr)
    throw Error(ErrorCode::InvalidInput, "measurement set is not bound to a grid");
  if (experiment < 0 || experiment >= static_cast<int>(ms.experiments.size()))
    throw Error(ErrorCode::InvalidInput, "experiment index out of range");
  if (ms.w_trace.size() != static_cast<int>(ms.grid->boundary_nodes.size()))
    throw Error(ErrorCode::InvalidInput, "trace length does not match the boundary loop");

  // Scatter the loop-ordered trace back to nodal indexing for the edge rule.
  Eigen::VectorXd nodal = Eigen::VectorXd::Zero(ms.grid->node_count());
  for (size_t i = 0; i < ms.grid->boundary_nodes.size(); ++i)
    nodal[ms.grid->boundary_nodes[i]] = ms.w_trace[static_cast<int>(i)];
  return boundary_functional(*ms.grid, nodal, ms.experiments[experiment].g);
}

ExponentialTest exponential_test(const Grid& grid, double lambda, int axis) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidInput, "lambda must be positive");
  if (axis != 1 && axis != 2) throw Error(ErrorCode::InvalidInput, "axis must be 1 or 2");
  const double lo = axis == 1 ? grid.domain.x0 : grid.domain.y0;
  const double hi = axis == 1 ? grid.domain.x1 : grid.domain.y1;
  const double extent = std::max(std::abs(lo), std::abs(hi));
  if (lambda * kSqrt3 * extent > 50.0)
    throw Error(ErrorCode::OverflowGuard, "exponential test data would overflow: lambda too large");

  ExponentialTest t;
  t.w = sample_nodal(grid, [&](double x, double y) {
    return std::exp(lambda * kSqrt3 * (axis == 1 ? x : y));
  });
  t.g = make_boundary_data(grid, [&](const Eigen::Vector2d& p, const Eigen::Vector2d& n) {
    return lambda * kSqrt3 * n[axis - 1] * std::exp(lambda * kSqrt3 * p[axis - 1]);
  });
  return t;
}

namespace {

double invert_position(double gamma, double scale, double lambda) {
  return std::log(gamma / scale) / (lambda * kSqrt3);
}

}  // namespace

Eigen::Vector2d localize_center_known_eps(double gamma1, double gamma2, double lambda,
                                          double eps, double area_factor) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
    throw Error(ErrorCode::Unlocatable,
                "nonpositive average measurement: data dominated by noise or remainder");
  if (!(lambda > 0.0) || !(eps > 0.0) || !(area_factor > 0.0))
    throw Error(ErrorCode::InvalidInput, "lambda, eps and area factor must be positive");
  const double scale = area_factor * eps * eps * lambda * lambda * lambda;
  return {invert_position(gamma1, scale, lambda), invert_position(gamma2, scale, lambda)};
}

TwoLambdaEstimate localize_center_two_lambda(double gamma1, double gamma2, double gamma1p,
                                             double gamma2p, double lambda, double lambda_p,
                                             double area_factor) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0) || !(gamma1p > 0.0) || !(gamma2p > 0.0))
    throw Error(ErrorCode::Unlocatable,
                "nonpositive average measurement: data dominated by noise or remainder");
  if (!(lambda > 0.0) || !(lambda_p > 0.0) || !(area_factor > 0.0))
    throw Error(ErrorCode::InvalidInput, "lambdas and area factor must be positive");
  if (lambda == lambda_p)
    throw Error(ErrorCode::InvalidInput, "two-lambda mode needs distinct lambdas");

  const double l3 = lambda * lambda * lambda;
  const double lp3 = lambda_p * lambda_p * lambda_p;
  const double denom = kSqrt3 * (lambda - lambda_p);
  TwoLambdaEstimate est;
  est.center = {std::log(gamma1 * lp3 / (gamma1p * l3)) / denom,
                std::log(gamma2 * lp3 / (gamma2p * l3)) / denom};
  est.epsilon_hat = std::sqrt(
      gamma1 / (area_factor * l3 * std::exp(lambda * kSqrt3 * est.center.x())));
  return est;
}

// psi = (x^2 + x - 3)/3 with primitive Psi = (x^3/3 + x^2/2 - 3x)/3.
double RiccatiBackground::psi(double x) const { return (x * x + x - 3.0) / 3.0; }
double RiccatiBackground::psi_prime(double x) const { return (2.0 * x + 1.0) / 3.0; }

double RiccatiBackground::u(double x) const {
  const double p = psi(x);
  return std::sqrt((psi_prime(x) + p * p) / 3.0);
}

double RiccatiBackground::u_prime(double x) const {
  // 6 U U' = psi'' + 2 psi psi'
  constexpr double psi_second = 2.0 / 3.0;
  return (psi_second + 2.0 * psi(x) * psi_prime(x)) / (6.0 * u(x));
}

double RiccatiBackground::u_second(double x) const {
  constexpr double psi_second = 2.0 / 3.0;  // psi''' = 0
  const double p = psi(x);
  const double pp = psi_prime(x);
  const double uu = u(x);
  return (2.0 * pp * pp + 2.0 * p * psi_second) / (6.0 * uu) -
         (psi_second + 2.0 * p * pp) * u_prime(x) / (6.0 * uu * uu);
}

double RiccatiBackground::f(double x) const {
  const double uu = u(x);
  return -u_second(x) + uu * uu * uu;
}

namespace {
double psi_primitive(double x) { return (x * x * x / 3.0 + x * x / 2.0 - 3.0 * x) / 3.0; }
}  // namespace

double RiccatiBackground::w(double x) const {
  return std::exp(psi_primitive(x) - psi_primitive(xbar));
}

double RiccatiBackground::w_prime(double x) const { return psi(x) * w(x); }

RiccatiBackground riccati_background(const Grid& grid, double xbar) {
  if (!(xbar > 0.0) || !(xbar < 1.0))
    throw Error(ErrorCode::InvalidInput, "normalization point must lie in (0, 1)");
  RiccatiBackground bg;
  bg.xbar = xbar;
  bg.u_field = sample_nodal(grid, [&](double x, double) { return bg.u(x); });
  bg.f_field = sample_nodal(grid, [&](double x, double) { return bg.f(x); });
  bg.w_field = sample_nodal(grid, [&](double x, double) { return bg.w(x); });
  return bg;
}

M11Recovery recover_m11(double gamma, double eps, double k, double xbar,
                        const RiccatiBackground& bg, double area_factor,
                        double u_prime_floor) {
  if (!(eps > 0.0) || !(area_factor > 0.0))
    throw Error(ErrorCode::InvalidInput, "eps and area factor must be positive");
  if (std::abs(bg.w(xbar) - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidInput, "background is not normalized at xbar");
  const double up = bg.u_prime(xbar);
  if (std::abs(up) < u_prime_floor)
    throw Error(ErrorCode::IllConditioned,
                "background gradient vanishes at xbar: M11 is unobservable here");
  const double denom = (1.0 - k) * up * bg.w_prime(xbar);
  if (std::abs(denom) < 1e-9)
    throw Error(ErrorCode::IllConditioned, "contrast too close to 1: denominator vanishes");

  const double uu = bg.u(xbar);
  M11Recovery r;
  r.value = (gamma / (eps * eps * area_factor) - uu * uu * uu * bg.w(xbar)) / denom;
  r.implausible = r.value < 0.5 || r.value > 2.0 / k;
  return r;
}

double NoiseStream::next_uniform() {
  // splitmix64 step; top 53 bits mapped to [0, 1), shifted to [-1, 1).
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  const double u01 = static_cast<double>(z >> 11) * 0x1.0p-53;
  return 2.0 * u01 - 1.0;
}

void NoiseStream::perturb(Eigen::VectorXd& values, double level) {
  if (level == 0.0) return;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    values[i] *= 1.0 + level * next_uniform();
}

namespace {

struct SynthesizedMeasurement {
  MeasurementSet ms;
  int newton_iterations = 0;
};

/// Perturbed minus unperturbed solve for a given source, noisy trace attached
/// to the provided experiments.
SynthesizedMeasurement synthesize(const Grid& grid, const Inclusion& truth,
                                  const Eigen::VectorXd& f, std::vector<Experiment> experiments,
                                  double noise_level, NoiseStream& noise,
                                  const SolverControls& controls) {
  const SolveReport pert = solve_perturbed(grid, {f, {truth}}, controls);
  const SolveReport base = solve_unperturbed(grid, f, controls);
  Eigen::VectorXd w = boundary_trace(grid, pert.solution.values - base.solution.values);
  noise.perturb(w, noise_level);
  SynthesizedMeasurement out;
  out.ms = MeasurementSet{&grid, std::move(w), std::move(experiments), noise_level};
  out.newton_iterations = pert.newton_iterations + base.newton_iterations;
  return out;
}

}  // namespace

ReconstructionOutcome reconstruct_single_inclusion(const Grid& grid, const Inclusion& truth,
                                                   const ReconstructionOptions& options,
                                                   const SolverControls& controls) {
  validate_inclusions(grid.domain, {truth});
  if (!(truth.k < 1.0))
    throw Error(ErrorCode::IllConditioned, "contrast k = 1 carries no conductivity signature");
  // The Riccati stage is built on the unit x-interval.
  if (grid.domain.x0 != 0.0 || grid.domain.x1 != 1.0)
    throw Error(ErrorCode::InvalidInput, "reconstruction requires the domain x-range [0, 1]");

  NoiseStream noise(options.seed);
  const double area_factor = truth.area_factor();

  ReconstructionOutcome out;
  out.degraded_accuracy = options.noise_level > 1e-3;

  auto constant_experiments = [&](double lambda) {
    return std::vector<Experiment>{{lambda, 1, exponential_test(grid, lambda, 1).g},
                                   {lambda, 2, exponential_test(grid, lambda, 2).g}};
  };

  // Stage 1: constant background U = lambda, source f = lambda^3.
  const double l3 = options.lambda * options.lambda * options.lambda;
  auto first = synthesize(grid, truth, Eigen::VectorXd::Constant(grid.node_count(), l3),
                          constant_experiments(options.lambda), options.noise_level, noise,
                          controls);
  out.total_newton_iterations += first.newton_iterations;
  out.ms_lambda = std::move(first.ms);
  out.gamma1 = average_measurement(out.ms_lambda, 0);
  out.gamma2 = average_measurement(out.ms_lambda, 1);

  if (options.mode == ReconstructionMode::TwoLambda) {
    const double lp3 = options.lambda_p * options.lambda_p * options.lambda_p;
    auto second = synthesize(grid, truth, Eigen::VectorXd::Constant(grid.node_count(), lp3),
                             constant_experiments(options.lambda_p), options.noise_level,
                             noise, controls);
    out.total_newton_iterations += second.newton_iterations;
    out.ms_lambda_p = std::move(second.ms);
    out.gamma1p = average_measurement(out.ms_lambda_p, 0);
    out.gamma2p = average_measurement(out.ms_lambda_p, 1);

    const TwoLambdaEstimate est =
        localize_center_two_lambda(out.gamma1, out.gamma2, out.gamma1p, out.gamma2p,
                                   options.lambda, options.lambda_p, area_factor);
    out.center = est.center;
    out.epsilon_hat = est.epsilon_hat;
  } else {
    out.center = localize_center_known_eps(out.gamma1, out.gamma2, options.lambda,
                                           truth.epsilon, area_factor);
    out.epsilon_hat = truth.epsilon;
  }

  if (!(out.center.x() > 0.02 && out.center.x() < 0.98))
    throw Error(ErrorCode::Unlocatable,
                "recovered center falls outside the admissible x-range");

  // Stage 2: Riccati background normalized at the recovered x-coordinate.
  const RiccatiBackground bg = riccati_background(grid, out.center.x());
  Experiment riccati_exp{0.0, 1,
                         make_boundary_data(grid, [&](const Eigen::Vector2d& p,
                                                      const Eigen::Vector2d& n) {
                           return bg.w_prime(p.x()) * n.x();
                         })};
  auto third = synthesize(grid, truth, bg.f_field.values, {std::move(riccati_exp)},
                          options.noise_level, noise, controls);
  out.total_newton_iterations += third.newton_iterations;
  out.ms_riccati = std::move(third.ms);
  out.gamma_riccati = average_measurement(out.ms_riccati, 0);

  const M11Recovery rec = recover_m11(out.gamma_riccati, out.epsilon_hat, truth.k,
                                      out.center.x(), bg, area_factor);
  out.m11 = rec.value;
  out.m11_implausible = rec.implausible;
  return out;
}

}  // namespace monolab
