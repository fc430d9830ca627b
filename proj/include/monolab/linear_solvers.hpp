#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <memory>

#include "monolab/assembly.hpp"

namespace monolab {

/// Sparse LDL^T of a symmetric positive definite operator. Factor once,
/// solve many; const solves are safe to share across threads in Eigen.
class SpdSolver {
 public:
  explicit SpdSolver(const SparseMatrix& a);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

 private:
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
};

/// Singular pure-Neumann operator with its constant kernel removed by one
/// Lagrange-multiplier row: solves [A c; c^T 0][u; mu] = [rhs; 0], so the
/// returned field satisfies c.u = 0 while the multiplier absorbs (only) the
/// roundoff incompatibility of the data.
class ConstrainedSolver {
 public:
  ConstrainedSolver(const SparseMatrix& a, const Eigen::VectorXd& constraint_row);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  int n_;
  Eigen::SparseLU<SparseMatrix> lu_;
};

}  // namespace monolab
