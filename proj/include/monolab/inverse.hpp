#pragma once

#include <cstdint>
#include <vector>

#include "monolab/asymptotics.hpp"

namespace monolab {

/// One boundary experiment: Neumann test data g (with the lambda and axis it
/// was built from; lambda = 0 marks non-exponential data).
struct Experiment {
  double lambda = 0.0;
  int axis = 1;
  BoundaryData g;
};

/// Boundary traces of a measured perturbation plus the test data applied.
struct MeasurementSet {
  const Grid* grid = nullptr;
  Eigen::VectorXd w_trace;  // per boundary node, loop order
  std::vector<Experiment> experiments;
  double noise_level = 0.0;
};

/// Average measurement: trapezoid rule for int_boundary w g dS.
double average_measurement(const MeasurementSet& ms, int experiment);

/// W = exp(lambda sqrt3 x_axis) with Neumann data g = lambda sqrt3 n_axis W;
/// W solves -Laplace W + 3 lambda^2 W = 0 exactly.
struct ExponentialTest {
  ScalarField w;
  BoundaryData g;
};
ExponentialTest exponential_test(const Grid& grid, double lambda, int axis);

/// Inversion of Gamma_j = area_factor eps^2 lambda^3 exp(lambda sqrt3 c_j)
/// with the size known. area_factor = 1 treats the inclusion area as eps^2.
Eigen::Vector2d localize_center_known_eps(double gamma1, double gamma2, double lambda,
                                          double eps, double area_factor = 1.0);

struct TwoLambdaEstimate {
  Eigen::Vector2d center;
  double epsilon_hat;
};

/// Ratio of the measurement model at two lambdas: the unknown size (and any
/// shape area factor) cancels in the center estimate; the size then follows
/// by substitution.
TwoLambdaEstimate localize_center_two_lambda(double gamma1, double gamma2, double gamma1p,
                                             double gamma2p, double lambda, double lambda_p,
                                             double area_factor = 1.0);

/// One-dimensional background potential generated by the Riccati relation
/// psi' + psi^2 = 3 U^2 with psi = (x^2 + x - 3)/3. U satisfies homogeneous
/// Neumann conditions at x = 0, 1; W = exp(int psi) solves W'' = 3 U^2 W and
/// is normalized to W(xbar) = 1. All derivatives are closed-form.
struct RiccatiBackground {
  double xbar = 0.5;

  double psi(double x) const;
  double psi_prime(double x) const;
  double u(double x) const;
  double u_prime(double x) const;
  double u_second(double x) const;
  double f(double x) const;  // -U'' + U^3
  double w(double x) const;
  double w_prime(double x) const;

  ScalarField u_field;
  ScalarField f_field;
  ScalarField w_field;
};

RiccatiBackground riccati_background(const Grid& grid, double xbar);

struct M11Recovery {
  double value = 0.0;
  bool implausible = false;  // outside [0.5, 2/k]
};

/// Inverts the average-measurement identity at a known center:
///   M11 = (Gamma / (eps^2 area_factor) - U^3(xbar) W(xbar))
///         / ((1-k) U'(xbar) W'(xbar)).
/// u_prime_floor guards the ill-conditioned regime around critical points.
M11Recovery recover_m11(double gamma, double eps, double k, double xbar,
                        const RiccatiBackground& bg, double area_factor,
                        double u_prime_floor = 1e-2);

/// Multiplicative noise w -> w (1 + level xi), xi drawn uniformly from
/// [-1, 1] by a splitmix-seeded generator; platform-independent stream.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : state_(seed) {}
  double next_uniform();  // [-1, 1)
  void perturb(Eigen::VectorXd& values, double level);

 private:
  std::uint64_t state_;
};

enum class ReconstructionMode { KnownEpsilon, TwoLambda };

struct ReconstructionOptions {
  ReconstructionMode mode = ReconstructionMode::TwoLambda;
  double lambda = 1.0;
  double lambda_p = 2.0;  // two-lambda mode only
  double noise_level = 0.0;
  std::uint64_t seed = 0;
};

struct ReconstructionOutcome {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double epsilon_hat = 0.0;
  double m11 = 0.0;
  bool m11_implausible = false;
  bool degraded_accuracy = false;
  double gamma1 = 0.0, gamma2 = 0.0;    // at lambda
  double gamma1p = 0.0, gamma2p = 0.0;  // at lambda' (two-lambda mode)
  double gamma_riccati = 0.0;
  int total_newton_iterations = 0;
  MeasurementSet ms_lambda, ms_lambda_p, ms_riccati;
};

/// Two-stage protocol on synthetic boundary data: localize with a constant
/// background and exponential test data, then make M11 observable with the
/// Riccati background normalized at the recovered center. The contrast k is
/// assumed known; data synthesis and measurement share one grid.
ReconstructionOutcome reconstruct_single_inclusion(const Grid& grid, const Inclusion& truth,
                                                   const ReconstructionOptions& options,
                                                   const SolverControls& controls = {});

}  // namespace monolab
