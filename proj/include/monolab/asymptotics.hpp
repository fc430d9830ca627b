#pragma once

#include <Eigen/Dense>
#include <vector>

#include "monolab/greens.hpp"

namespace monolab {

/// 2x2 symmetric polarization tensor of one inclusion; eigenvalues sit in
/// [1, 1/k] for an admissible contrast.
struct PolarizationTensor {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  double raw_asymmetry = 0.0;  // |m12 - m21| before symmetrization
  double contrast_k = 1.0;
  double epsilon = 0.0;
  double discrete_area = 0.0;  // sum of element areas assigned to the inclusion
  bool extrapolated = false;

  Eigen::Vector2d eigenvalues() const;
};

/// M_ij = |omega|^{-1} int_omega d v^(j) / d x_i over the discrete inclusion,
/// v^(j) the perturbed correctors. Requires epsilon >= 4h.
PolarizationTensor polarization(const Grid& grid, const Inclusion& inclusion);

/// Richardson extrapolation over epsilon and epsilon/2 (both resolved).
PolarizationTensor polarization_extrapolated(const Grid& grid, const Inclusion& inclusion);

/// One inclusion reduced to the data the representation formula needs.
struct InclusionMoment {
  Eigen::Vector2d center = {0.5, 0.5};
  Eigen::Matrix2d tensor = Eigen::Matrix2d::Identity();
  double area = 0.0;  // |omega_l|, discrete
  double k = 0.5;
};

InclusionMoment moment_of(const Grid& grid, const Inclusion& inclusion);

/// Leading-order boundary perturbation
///   w(y) ~ sum_l |omega_l| [ (1-k_l) grad U(z_l) . M_l grad_x N_U(z_l, y)
///                            + U^3(z_l) N_U(z_l, y) ]
/// evaluated at every boundary node via reciprocity: one point-source solve
/// and two gradient-functional solves per inclusion against the shared
/// factorization. Gradients at centers are patch averages.
Eigen::VectorXd asymptotic_perturbation(const LinearizedOperator& op, const ScalarField& u_background,
                                        const std::vector<InclusionMoment>& moments);
/// Convenience: builds the operator and the moments, enforcing the 10-epsilon
/// separation rule for multiple inclusions.
Eigen::VectorXd asymptotic_perturbation(const Grid& grid, const ScalarField& u_background,
                                        const std::vector<Inclusion>& inclusions);

/// w = u_eps - U restricted to the boundary loop; both fields must live on
/// the same grid layout.
Eigen::VectorXd measured_perturbation(const ScalarField& u_eps, const ScalarField& u_background);

struct RateStudy {
  std::vector<double> epsilons;
  std::vector<double> areas;  // discrete |omega_eps|
  std::vector<double> h1_errors;
  std::vector<double> l2_errors;
  std::vector<double> boundary_errors;  // L2 norm of the boundary trace
  double slope_h1 = 0.0;
  double slope_l2 = 0.0;
  double slope_boundary = 0.0;
};

/// Shrinks a fixed-shape inclusion through the given (strictly decreasing)
/// epsilons, solves, and fits log-log slopes of the perturbation norms
/// against |omega_eps|.
RateStudy rate_study(const Grid& grid, const Eigen::VectorXd& f, const Inclusion& shape_template,
                     const std::vector<double>& epsilons, const SolverControls& controls = {});

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace monolab
