#pragma once

#include <memory>

#include "monolab/forward.hpp"
#include "monolab/linear_solvers.hpp"

namespace monolab {

/// Discrete operator -Laplace + 3 U^2 with natural homogeneous Neumann
/// condition, factored once so that many point-source (and general) solves
/// can share it. Positive definite whenever U is nonzero on positive area.
class LinearizedOperator {
 public:
  LinearizedOperator(const Grid& grid, const ScalarField& u_background);

  /// Column of the discrete Neumann function: solves A n = e_node (unit nodal
  /// load as the discrete point source). Reciprocity holds by symmetry.
  ScalarField point_source_solution(int node) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  const Grid& grid() const { return *grid_; }
  const SparseMatrix& matrix() const { return matrix_; }

 private:
  const Grid* grid_;
  SparseMatrix matrix_;
  std::unique_ptr<SpdSolver> solver_;
};

/// N_U(., y) for a single source node; builds and discards a factorization.
ScalarField neumann_function(const Grid& grid, const ScalarField& u_background, int source_node);

/// Harmonic corrector: pure-Neumann Laplace problem with flux data n_j,
/// normalized to zero boundary mean. Equals x_j minus its boundary mean.
ScalarField corrector_V(const Grid& grid, int axis);

/// Same problem with the piecewise conductivity of one inclusion.
ScalarField corrector_v_eps(const Grid& grid, const Inclusion& inclusion, int axis);

/// Flux data int_boundary n_axis phi_i dS shared by both correctors.
Eigen::VectorXd normal_component_load(const Grid& grid, int axis);

}  // namespace monolab
