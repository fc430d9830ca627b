#include "monolab/forward.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "monolab/linear_solvers.hpp"

namespace monolab {

namespace {

double discrete_energy(const Grid& grid, const SparseMatrix& k_kappa,
                       const Eigen::VectorXd& chi, const Eigen::VectorXd& load,
                       const Eigen::VectorXd& u) {
  return 0.5 * u.dot(k_kappa * u) + 0.25 * quartic_integral(grid, chi, u) - load.dot(u);
}

}  // namespace

SolveReport solve_perturbed(const Grid& grid, const ProblemSpec& spec,
                            const SolverControls& controls) {
  if (spec.f.size() != grid.node_count())
    throw Error(ErrorCode::InvalidInput, "source length must equal node count");
  if (!spec.f.allFinite())
    throw Error(ErrorCode::InvalidInput, "source contains non-finite values");
  validate_inclusions(grid.domain, spec.inclusions);

  const ElementRegions regions = classify_elements(grid, spec.inclusions);
  const SparseMatrix k_kappa = assemble_stiffness(grid, regions.kappa);
  const Eigen::VectorXd load = assemble_load(grid, spec.f);

  // Norm operators for the step criterion.
  const SparseMatrix k_one = assemble_stiffness(grid, 1.0);
  const SparseMatrix mass = assemble_mass(grid);

  const double mean_f = domain_integral(grid, spec.f) / grid.domain.area();
  Eigen::VectorXd u = Eigen::VectorXd::Constant(grid.node_count(), std::cbrt(mean_f));

  const double tol_r = controls.tol * (1.0 + load.norm());

  SolveReport report;
  Eigen::VectorXd residual = k_kappa * u + assemble_cubic_term(grid, regions.chi, u) - load;
  double res_norm = residual.norm();
  double e = discrete_energy(grid, k_kappa, regions.chi, load, u);
  report.residual_history.push_back(res_norm);
  report.energy_history.push_back(e);

  // Degenerate start (f with zero mean and zero residual): the Jacobian at
  // u = 0 is the singular pure-Neumann stiffness, so stop before factoring.
  if (res_norm <= tol_r && u.isZero()) {
    report.solution = make_field(grid, std::move(u));
    report.final_residual = res_norm;
    report.energy = e;
    return report;
  }

  bool converged = false;
  for (int it = 1; it <= controls.max_iter; ++it) {
    const SparseMatrix jac = k_kappa + assemble_cubic_hessian(grid, regions.chi, u);
    const SpdSolver solver(jac);
    const Eigen::VectorXd step = solver.solve(-residual);

    // Backtracking on the energy; the step is a descent direction because the
    // Jacobian is the (positive definite) Hessian of the energy.
    const double slope = residual.dot(step);
    double alpha = 1.0;
    double best_e = std::numeric_limits<double>::infinity();
    double best_alpha = 1.0;
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(e));
    bool accepted = false;
    for (int halving = 0; halving <= controls.max_halvings; ++halving) {
      const Eigen::VectorXd cand = u + alpha * step;
      const double ecand = discrete_energy(grid, k_kappa, regions.chi, load, cand);
      if (ecand < best_e) {
        best_e = ecand;
        best_alpha = alpha;
      }
      if (ecand <= e + 1e-4 * alpha * slope + slack) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) alpha = best_alpha;  // still nonincreasing up to roundoff

    u += alpha * step;
    residual = k_kappa * u + assemble_cubic_term(grid, regions.chi, u) - load;
    res_norm = residual.norm();
    e = discrete_energy(grid, k_kappa, regions.chi, load, u);
    report.residual_history.push_back(res_norm);
    report.energy_history.push_back(e);
    report.newton_iterations = it;

    const Eigen::VectorXd taken = alpha * step;
    const double step_h1 = std::sqrt(taken.dot(k_one * taken) + taken.dot(mass * taken));
    if (res_norm <= tol_r && step_h1 <= controls.step_tol) {
      converged = true;
      break;
    }
  }

  if (!converged)
    throw ConvergenceError("Newton did not converge within " +
                               std::to_string(controls.max_iter) + " iterations (residual " +
                               std::to_string(res_norm) + ")",
                           report.residual_history);

  report.solution = make_field(grid, std::move(u));
  report.final_residual = res_norm;
  report.energy = e;
  return report;
}

SolveReport solve_unperturbed(const Grid& grid, const Eigen::VectorXd& f,
                              const SolverControls& controls) {
  return solve_perturbed(grid, ProblemSpec{f, {}}, controls);
}

double energy(const Grid& grid, const ProblemSpec& spec, const ScalarField& u) {
  const ElementRegions regions = classify_elements(grid, spec.inclusions);
  const SparseMatrix k_kappa = assemble_stiffness(grid, regions.kappa);
  const Eigen::VectorXd load = assemble_load(grid, spec.f);
  return discrete_energy(grid, k_kappa, regions.chi, load, u.values);
}

double monotonicity_gap(const Grid& grid, const ProblemSpec& spec, const ScalarField& u,
                        const ScalarField& v) {
  const ElementRegions regions = classify_elements(grid, spec.inclusions);
  const SparseMatrix k_kappa = assemble_stiffness(grid, regions.kappa);
  const Eigen::VectorXd d = u.values - v.values;
  double gap = d.dot(k_kappa * d);
  for (int e = 0; e < grid.element_count(); ++e) {
    if (regions.chi[e] == 0.0) continue;
    const auto row = grid.elements.row(e);
    const double w = regions.chi[e] * grid.areas[e] / 3.0;
    constexpr int qa[3] = {0, 1, 2};
    constexpr int qb[3] = {1, 2, 0};
    for (int q = 0; q < 3; ++q) {
      const int a = row[qa[q]];
      const int b = row[qb[q]];
      const double uq = 0.5 * (u.values[a] + u.values[b]);
      const double vq = 0.5 * (v.values[a] + v.values[b]);
      const double dq = 0.5 * (d[a] + d[b]);
      gap += w * dq * dq * (uq * uq + uq * vq + vq * vq);
    }
  }
  return gap;
}

double l2_norm(const ScalarField& u) {
  const SparseMatrix m = assemble_mass(*u.grid);
  return std::sqrt(u.values.dot(m * u.values));
}

double h1_seminorm(const ScalarField& u) {
  const SparseMatrix k = assemble_stiffness(*u.grid, 1.0);
  return std::sqrt(std::max(0.0, u.values.dot(k * u.values)));
}

double h1_norm(const ScalarField& u) {
  const SparseMatrix k = assemble_stiffness(*u.grid, 1.0);
  const SparseMatrix m = assemble_mass(*u.grid);
  return std::sqrt(std::max(0.0, u.values.dot(k * u.values)) + u.values.dot(m * u.values));
}

ComparisonReport comparison_check(const Grid& grid, const Eigen::VectorXd& f1,
                                  const Eigen::VectorXd& f2, const SolverControls& controls) {
  if (f1.size() != grid.node_count() || f2.size() != grid.node_count())
    throw Error(ErrorCode::InvalidInput, "source length must equal node count");
  if (((f2 - f1).array() < 0.0).any())
    throw Error(ErrorCode::InvalidInput, "comparison requires f2 >= f1 nodewise");

  ComparisonReport report;
  report.u1 = solve_unperturbed(grid, f1, controls).solution;
  report.u2 = solve_unperturbed(grid, f2, controls).solution;
  report.tolerance = 10.0 * grid.h() * grid.h();
  report.max_violation = (report.u1.values - report.u2.values).maxCoeff();
  report.ordered = report.max_violation <= report.tolerance;
  return report;
}

double poincare_constant(const Grid& grid, const Eigen::VectorXd& g_nodal) {
  if (g_nodal.size() != grid.node_count())
    throw Error(ErrorCode::InvalidInput, "weight length must equal node count");
  const double g_integral = domain_integral(grid, g_nodal);
  if (std::abs(g_integral - 1.0) > 1e-10)
    throw Error(ErrorCode::InvalidInput, "weight must integrate to 1");

  const SparseMatrix k = assemble_stiffness(grid, 1.0);
  const SparseMatrix m = assemble_mass(grid);
  const Eigen::VectorXd a = m * g_nodal;            // a.u = int u g
  const Eigen::VectorXd m_row = m * Eigen::VectorXd::Ones(grid.node_count());

  // Fluctuation form B = P^T M P with P u = u - (a.u) 1. B annihilates
  // constants and maps into range(K), so the constrained solve is exact.
  auto b_times = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd pu = u;
    pu.array() -= a.dot(u);
    const Eigen::VectorXd mpu = m * pu;
    return (mpu - a * mpu.sum()).eval();  // P^T z = z - a (1.z)
  };

  const ConstrainedSolver inv_k(k, m_row);

  // Power iteration on K^{-1} B for the largest generalized eigenvalue.
  Eigen::VectorXd v(grid.node_count());
  for (int i = 0; i < grid.node_count(); ++i) {
    const double x = grid.nodes(i, 0), y = grid.nodes(i, 1);
    v[i] = x - 0.37 * y + 0.25 * std::sin(3.0 * x + y);
  }
  v.array() -= a.dot(v);

  double lambda = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const Eigen::VectorXd bv = b_times(v);
    Eigen::VectorXd w = inv_k.solve(bv);
    const double norm = w.norm();
    if (!(norm > 0.0) || !w.allFinite())
      throw Error(ErrorCode::NumericalError, "power iteration broke down");
    w /= norm;
    const double num = w.dot(b_times(w));
    const double den = w.dot(k * w);
    const double next = num / den;
    const bool done = it > 2 && std::abs(next - lambda) <= 1e-12 * std::abs(next);
    lambda = next;
    v = w;
    if (done) break;
  }
  if (!(lambda > 0.0))
    throw Error(ErrorCode::NumericalError, "extremal eigenvalue estimate is not positive");
  return std::sqrt(lambda);
}

}  // namespace monolab
