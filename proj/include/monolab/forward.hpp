#pragma once

#include <vector>

#include "monolab/assembly.hpp"
#include "monolab/inclusion.hpp"

namespace monolab {

struct SolverControls {
  double tol = 1e-10;       // weak residual: ||r|| <= tol * (1 + ||load||)
  double step_tol = 1e-10;  // H1 norm of the Newton step
  int max_iter = 50;
  int max_halvings = 30;
};

/// Source term plus the inclusion geometry of one steady problem.
struct ProblemSpec {
  Eigen::VectorXd f;  // nodal source
  std::vector<Inclusion> inclusions;
};

struct SolveReport {
  ScalarField solution;
  int newton_iterations = 0;
  double final_residual = 0.0;
  double energy = 0.0;
  std::vector<double> residual_history;
  std::vector<double> energy_history;
};

/// Damped Newton on the monotone semilinear operator
///   -div(kappa grad u) + chi u^3 = f,  homogeneous Neumann.
/// The Jacobian is the exact Hessian of the discrete energy, so backtracking
/// on the energy always finds descent and the iteration lands on the unique
/// discrete minimizer.
SolveReport solve_perturbed(const Grid& grid, const ProblemSpec& spec,
                            const SolverControls& controls = {});

/// Background problem: no inclusions, kappa = chi = 1.
SolveReport solve_unperturbed(const Grid& grid, const Eigen::VectorXd& f,
                              const SolverControls& controls = {});

/// E(u) = 1/2 int kappa |grad u|^2 + 1/4 int chi u^4 - int f u.
double energy(const Grid& grid, const ProblemSpec& spec, const ScalarField& u);

/// <Tu - Tv, u - v> = int kappa |grad(u-v)|^2 + int chi (u-v)^2 (u^2 + uv + v^2);
/// nonnegative, zero only for identical fields.
double monotonicity_gap(const Grid& grid, const ProblemSpec& spec, const ScalarField& u,
                        const ScalarField& v);

double l2_norm(const ScalarField& u);
double h1_norm(const ScalarField& u);
double h1_seminorm(const ScalarField& u);

struct ComparisonReport {
  bool ordered = true;
  double max_violation = 0.0;  // max(U1 - U2) over nodes
  double tolerance = 0.0;
  ScalarField u1, u2;
};

/// Solves both background problems and checks U2 >= U1 - 10 h^2 nodewise.
/// Requires f2 >= f1 nodewise.
ComparisonReport comparison_check(const Grid& grid, const Eigen::VectorXd& f1,
                                  const Eigen::VectorXd& f2,
                                  const SolverControls& controls = {});

/// Smallest S with ||u - int(u g)||_L2 <= S ||grad u||_L2 over the discrete
/// space, for a weight g with unit integral. Computed as the extremal
/// generalized eigenvalue of the fluctuation form against the stiffness form
/// on the complement of constants (power iteration on the inverted operator).
double poincare_constant(const Grid& grid, const Eigen::VectorXd& g_nodal);

}  // namespace monolab
