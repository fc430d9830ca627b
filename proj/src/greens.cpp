#include "monolab/greens.hpp"

namespace monolab {

namespace {

void check_axis(int axis) {
  if (axis != 1 && axis != 2)
    throw Error(ErrorCode::InvalidInput, "axis must be 1 or 2");
}

Eigen::VectorXd solve_neumann_flux(const Grid& grid, const SparseMatrix& stiffness, int axis) {
  const Eigen::VectorXd s = boundary_lumped_weights(grid);
  const ConstrainedSolver solver(stiffness, s);
  Eigen::VectorXd v = solver.solve(normal_component_load(grid, axis));
  // The constraint already imposes a zero boundary mean; re-center to shave
  // the roundoff left by the saddle solve.
  v.array() -= s.dot(v) / s.sum();
  return v;
}

}  // namespace

LinearizedOperator::LinearizedOperator(const Grid& grid, const ScalarField& u_background)
    : grid_(&grid) {
  if (u_background.values.size() != grid.node_count())
    throw Error(ErrorCode::InvalidInput, "background field length mismatch");
  const Eigen::VectorXd chi = Eigen::VectorXd::Ones(grid.element_count());
  const double squared_mass =
      u_background.values.dot(assemble_mass(grid) * u_background.values);
  // int U^2 == 0 means the pure-Neumann operator keeps its constant kernel.
  if (squared_mass <= 1e-14 * grid.domain.area())
    throw Error(ErrorCode::SingularOperator,
                "background is (numerically) zero: operator keeps the constant kernel");
  matrix_ = assemble_stiffness(grid, 1.0) +
            assemble_cubic_hessian(grid, chi, u_background.values);
  solver_ = std::make_unique<SpdSolver>(matrix_);
}

ScalarField LinearizedOperator::point_source_solution(int node) const {
  if (node < 0 || node >= grid_->node_count())
    throw Error(ErrorCode::InvalidInput, "source node out of range");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(grid_->node_count());
  e[node] = 1.0;
  return make_field(*grid_, solver_->solve(e));
}

Eigen::VectorXd LinearizedOperator::solve(const Eigen::VectorXd& rhs) const {
  return solver_->solve(rhs);
}

ScalarField neumann_function(const Grid& grid, const ScalarField& u_background,
                             int source_node) {
  return LinearizedOperator(grid, u_background).point_source_solution(source_node);
}

Eigen::VectorXd normal_component_load(const Grid& grid, int axis) {
  check_axis(axis);
  BoundaryData g = make_boundary_data(grid, [axis](const Eigen::Vector2d&,
                                                   const Eigen::Vector2d& n) {
    return n[axis - 1];
  });
  return assemble_boundary_load(grid, g);
}

ScalarField corrector_V(const Grid& grid, int axis) {
  check_axis(axis);
  return make_field(grid, solve_neumann_flux(grid, assemble_stiffness(grid, 1.0), axis));
}

ScalarField corrector_v_eps(const Grid& grid, const Inclusion& inclusion, int axis) {
  check_axis(axis);
  validate_inclusions(grid.domain, {inclusion});
  const ElementRegions regions = classify_elements(grid, {inclusion});
  return make_field(grid,
                    solve_neumann_flux(grid, assemble_stiffness(grid, regions.kappa), axis));
}

}  // namespace monolab
