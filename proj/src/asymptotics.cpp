#include "monolab/asymptotics.hpp"

#include <cmath>
#include <string>

namespace monolab {

Eigen::Vector2d PolarizationTensor::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  return es.eigenvalues();
}

PolarizationTensor polarization(const Grid& grid, const Inclusion& inclusion) {
  validate_inclusions(grid.domain, {inclusion});
  if (inclusion.epsilon < 4.0 * grid.h())
    throw Error(ErrorCode::ResolutionError,
                "inclusion is under-resolved: epsilon < 4h (epsilon = " +
                    std::to_string(inclusion.epsilon) + ", h = " + std::to_string(grid.h()) + ")");

  const ElementRegions regions = classify_elements(grid, {inclusion});
  const double area = regions.inclusion_areas[0];
  if (area <= 0.0)
    throw Error(ErrorCode::ResolutionError, "no element centroid falls inside the inclusion");

  Eigen::Matrix2d raw = Eigen::Matrix2d::Zero();
  for (int j = 1; j <= 2; ++j) {
    const ScalarField v = corrector_v_eps(grid, inclusion, j);
    const Eigen::MatrixX2d grads = element_gradients(grid, v.values);
    for (int e = 0; e < grid.element_count(); ++e)
      if (regions.owner[e] == 0)
        raw.col(j - 1) += grid.areas[e] * grads.row(e).transpose();
  }
  raw /= area;

  PolarizationTensor t;
  t.raw_asymmetry = std::abs(raw(0, 1) - raw(1, 0));
  t.m = 0.5 * (raw + raw.transpose());
  t.contrast_k = inclusion.k;
  t.epsilon = inclusion.epsilon;
  t.discrete_area = area;
  return t;
}

PolarizationTensor polarization_extrapolated(const Grid& grid, const Inclusion& inclusion) {
  Inclusion half = inclusion;
  half.epsilon = 0.5 * inclusion.epsilon;
  const PolarizationTensor coarse = polarization(grid, inclusion);
  const PolarizationTensor fine = polarization(grid, half);
  PolarizationTensor t = fine;
  // First-order geometric error in epsilon: eliminate the O(eps) term.
  t.m = 2.0 * fine.m - coarse.m;
  t.raw_asymmetry = std::max(coarse.raw_asymmetry, fine.raw_asymmetry);
  t.epsilon = inclusion.epsilon;
  t.discrete_area = coarse.discrete_area;
  t.extrapolated = true;
  return t;
}

InclusionMoment moment_of(const Grid& grid, const Inclusion& inclusion) {
  const PolarizationTensor t = polarization(grid, inclusion);
  return {inclusion.center, t.m, t.discrete_area, inclusion.k};
}

namespace {

/// Linear functional whose action on a nodal field returns the patch-averaged
/// gradient component at p (area weights over elements touching the node
/// nearest to p).
Eigen::VectorXd patch_gradient_functional(const Grid& grid, const Eigen::Vector2d& p,
                                          int component) {
  const int v = grid.nearest_node(p);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(grid.node_count());
  double total = 0.0;
  for (int e = 0; e < grid.element_count(); ++e) {
    const auto row = grid.elements.row(e);
    if (row[0] != v && row[1] != v && row[2] != v) continue;
    total += grid.areas[e];
    const Eigen::Vector2d p0 = grid.nodes.row(row[0]);
    const Eigen::Vector2d p1 = grid.nodes.row(row[1]);
    const Eigen::Vector2d p2 = grid.nodes.row(row[2]);
    const double inv2a = 1.0 / (2.0 * grid.areas[e]);
    const Eigen::Vector2d g0{(p1.y() - p2.y()) * inv2a, (p2.x() - p1.x()) * inv2a};
    const Eigen::Vector2d g1{(p2.y() - p0.y()) * inv2a, (p0.x() - p2.x()) * inv2a};
    const Eigen::Vector2d g2{(p0.y() - p1.y()) * inv2a, (p1.x() - p0.x()) * inv2a};
    c[row[0]] += grid.areas[e] * g0[component];
    c[row[1]] += grid.areas[e] * g1[component];
    c[row[2]] += grid.areas[e] * g2[component];
  }
  return c / total;
}

}  // namespace

Eigen::VectorXd asymptotic_perturbation(const LinearizedOperator& op,
                                        const ScalarField& u_background,
                                        const std::vector<InclusionMoment>& moments) {
  const Grid& grid = op.grid();
  const double d0 = 0.1 * grid.domain.min_side();
  const int nb = static_cast<int>(grid.boundary_nodes.size());
  Eigen::VectorXd prediction = Eigen::VectorXd::Zero(nb);

  for (const auto& moment : moments) {
    if (!grid.domain.contains(moment.center) ||
        grid.domain.boundary_distance(moment.center) < d0)
      throw Error(ErrorCode::InvalidCenter,
                  "inclusion center outside the domain or inside the boundary margin");

    // Reciprocity: N_U(z, y) over all y is one solve with the source at z,
    // and d/dx_j N_U(z, y) is one solve against the gradient functional.
    const ScalarField n_z = op.point_source_solution(grid.nearest_node(moment.center));
    const Eigen::VectorXd q1 = op.solve(patch_gradient_functional(grid, moment.center, 0));
    const Eigen::VectorXd q2 = op.solve(patch_gradient_functional(grid, moment.center, 1));

    const Eigen::Vector2d grad_u = patch_gradient(grid, u_background.values, moment.center);
    const double u_center = eval_field(grid, u_background.values, moment.center);
    const Eigen::Vector2d mg = moment.tensor * grad_u;  // M grad U (M symmetric)

    for (int i = 0; i < nb; ++i) {
      const int y = grid.boundary_nodes[i];
      const double grad_term = (1.0 - moment.k) * (mg[0] * q1[y] + mg[1] * q2[y]);
      const double reaction_term = u_center * u_center * u_center * n_z.values[y];
      prediction[i] += moment.area * (grad_term + reaction_term);
    }
  }
  return prediction;
}

Eigen::VectorXd asymptotic_perturbation(const Grid& grid, const ScalarField& u_background,
                                        const std::vector<Inclusion>& inclusions) {
  validate_inclusions(grid.domain, inclusions);
  require_well_separated(inclusions);
  std::vector<InclusionMoment> moments;
  moments.reserve(inclusions.size());
  for (const auto& inc : inclusions) moments.push_back(moment_of(grid, inc));
  const LinearizedOperator op(grid, u_background);
  return asymptotic_perturbation(op, u_background, moments);
}

Eigen::VectorXd measured_perturbation(const ScalarField& u_eps, const ScalarField& u_background) {
  if (u_eps.grid == nullptr || u_background.grid == nullptr ||
      !u_eps.grid->same_layout(*u_background.grid))
    throw Error(ErrorCode::InvalidInput, "fields live on different grids");
  return boundary_trace(*u_eps.grid, u_eps.values - u_background.values);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::InvalidInput, "slope fit needs at least two samples");
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RateStudy rate_study(const Grid& grid, const Eigen::VectorXd& f, const Inclusion& shape_template,
                     const std::vector<double>& epsilons, const SolverControls& controls) {
  if (epsilons.size() < 3)
    throw Error(ErrorCode::InvalidInput, "rate study needs at least three epsilons");
  for (size_t i = 1; i < epsilons.size(); ++i)
    if (!(epsilons[i] < epsilons[i - 1]))
      throw Error(ErrorCode::InvalidInput, "epsilons must be strictly decreasing");
  for (double eps : epsilons)
    if (eps < 4.0 * grid.h())
      throw Error(ErrorCode::ResolutionError, "epsilon " + std::to_string(eps) +
                                                  " is under-resolved on this mesh");

  const ScalarField u0 = solve_unperturbed(grid, f, controls).solution;

  RateStudy study;
  study.epsilons = epsilons;
  for (double eps : epsilons) {
    Inclusion inc = shape_template;
    inc.epsilon = eps;
    const ElementRegions regions = classify_elements(grid, {inc});
    const ScalarField u = solve_perturbed(grid, {f, {inc}}, controls).solution;
    const ScalarField w = make_field(grid, u.values - u0.values);
    const BoundaryData trace_data = boundary_data_from_nodal(grid, w.values);
    const double boundary_l2 =
        std::sqrt(std::max(0.0, boundary_functional(grid, w.values, trace_data)));
    study.areas.push_back(regions.inclusion_areas[0]);
    study.h1_errors.push_back(h1_norm(w));
    study.l2_errors.push_back(l2_norm(w));
    study.boundary_errors.push_back(boundary_l2);
  }
  study.slope_h1 = loglog_slope(study.areas, study.h1_errors);
  study.slope_l2 = loglog_slope(study.areas, study.l2_errors);
  study.slope_boundary = loglog_slope(study.areas, study.boundary_errors);
  return study;
}

}  // namespace monolab
