#include "monolab/linear_solvers.hpp"

#include <vector>

namespace monolab {

SpdSolver::SpdSolver(const SparseMatrix& a) {
  ldlt_.compute(a);
  if (ldlt_.info() != Eigen::Success)
    throw Error(ErrorCode::NumericalError, "sparse LDLT factorization failed");
  if (ldlt_.vectorD().minCoeff() <= 0.0)
    throw Error(ErrorCode::SingularOperator, "operator is not positive definite");
}

Eigen::VectorXd SpdSolver::solve(const Eigen::VectorXd& rhs) const {
  return ldlt_.solve(rhs);
}

Eigen::MatrixXd SpdSolver::solve(const Eigen::MatrixXd& rhs) const {
  return ldlt_.solve(rhs);
}

ConstrainedSolver::ConstrainedSolver(const SparseMatrix& a,
                                     const Eigen::VectorXd& constraint_row)
    : n_(static_cast<int>(a.rows())) {
  if (constraint_row.size() != n_)
    throw Error(ErrorCode::InvalidInput, "constraint row length mismatch");

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.nonZeros() + 2 * n_);
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < n_; ++i) {
    if (constraint_row[i] == 0.0) continue;
    trips.emplace_back(i, n_, constraint_row[i]);
    trips.emplace_back(n_, i, constraint_row[i]);
  }
  SparseMatrix aug(n_ + 1, n_ + 1);
  aug.setFromTriplets(trips.begin(), trips.end());
  aug.makeCompressed();
  lu_.compute(aug);
  if (lu_.info() != Eigen::Success)
    throw Error(ErrorCode::NumericalError, "sparse LU factorization of the augmented system failed");
}

Eigen::VectorXd ConstrainedSolver::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != n_)
    throw Error(ErrorCode::InvalidInput, "rhs length mismatch");
  Eigen::VectorXd ext = Eigen::VectorXd::Zero(n_ + 1);
  ext.head(n_) = rhs;
  const Eigen::VectorXd sol = lu_.solve(ext);
  return sol.head(n_);
}

}  // namespace monolab
