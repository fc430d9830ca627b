#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "monolab/grid.hpp"

namespace monolab {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// K(i,j) = sum_e coeff_e * int_e grad(phi_i).grad(phi_j); coeff is one strictly
/// positive value per element. Pure Neumann: rows sum to zero, kernel = constants.
SparseMatrix assemble_stiffness(const Grid& grid, const Eigen::VectorXd& coeff_per_element);
SparseMatrix assemble_stiffness(const Grid& grid, double coeff = 1.0);

/// M(i,j) = int w * phi_i * phi_j with w >= 0 interpolated affinely from nodal
/// values; the closed-form element integrals are exact for affine w.
SparseMatrix assemble_weighted_mass(const Grid& grid, const Eigen::VectorXd& nodal_weight);
/// Same with a per-element constant weight.
SparseMatrix assemble_weighted_mass_elementwise(const Grid& grid,
                                                const Eigen::VectorXd& weight_per_element);
SparseMatrix assemble_mass(const Grid& grid);

/// load_i = int f * phi_i by the mid-edge rule (exact for affine f).
Eigen::VectorXd assemble_load(const Grid& grid, const Eigen::VectorXd& f_nodal);

/// Boundary data sampled at the two endpoints of every boundary edge. Keeping
/// the values per edge (not per node) lets corner nodes carry the normal of
/// each adjacent side separately.
struct BoundaryData {
  Eigen::MatrixX2d values;  // row e: value at tail, value at head of edge e
};

/// Sample f(point, outward normal) at both endpoints of every boundary edge.
template <typename F>
BoundaryData make_boundary_data(const Grid& grid, F&& f) {
  BoundaryData d;
  d.values.resize(static_cast<int>(grid.boundary_edges.size()), 2);
  for (size_t e = 0; e < grid.boundary_edges.size(); ++e) {
    const auto& edge = grid.boundary_edges[e];
    d.values(static_cast<int>(e), 0) =
        f(Eigen::Vector2d(grid.nodes.row(edge.tail)), edge.normal);
    d.values(static_cast<int>(e), 1) =
        f(Eigen::Vector2d(grid.nodes.row(edge.head)), edge.normal);
  }
  return d;
}

BoundaryData boundary_data_from_nodal(const Grid& grid, const Eigen::VectorXd& field);

/// Trapezoid rule for int_{boundary} trace * g dS over the edge loop.
double boundary_functional(const Grid& grid, const Eigen::VectorXd& trace_nodal,
                           const BoundaryData& g);

/// r_i = int_{boundary} g * phi_i dS (trapezoid per edge).
Eigen::VectorXd assemble_boundary_load(const Grid& grid, const BoundaryData& g);

/// s_i = int_{boundary} phi_i dS; zero at interior nodes.
Eigen::VectorXd boundary_lumped_weights(const Grid& grid);

/// Nonlinear cubic term and its exact derivative, both evaluated with the
/// P1 interpolant sampled at the mid-edge quadrature points:
///   cubic_i   = sum_e chi_e (A/3) sum_q u(x_q)^3 phi_i(x_q)
///   hessian   = sum_e chi_e (A/3) sum_q 3 u(x_q)^2 phi_i(x_q) phi_j(x_q)
///   quartic   = sum_e chi_e (A/3) sum_q u(x_q)^4
Eigen::VectorXd assemble_cubic_term(const Grid& grid, const Eigen::VectorXd& chi_per_element,
                                    const Eigen::VectorXd& u);
SparseMatrix assemble_cubic_hessian(const Grid& grid, const Eigen::VectorXd& chi_per_element,
                                    const Eigen::VectorXd& u);
double quartic_integral(const Grid& grid, const Eigen::VectorXd& chi_per_element,
                        const Eigen::VectorXd& u);

/// int_Omega of the P1 interpolant (mid-edge rule, exact for P1).
double domain_integral(const Grid& grid, const Eigen::VectorXd& u_nodal);

}  // namespace monolab
