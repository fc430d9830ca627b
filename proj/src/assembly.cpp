#include "monolab/assembly.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace monolab {

namespace {

struct ElementGeometry {
  std::array<int, 3> n;
  std::array<Eigen::Vector2d, 3> grad;  // gradients of the three hat functions
  double area;
};

ElementGeometry element_geometry(const Grid& grid, int e) {
  ElementGeometry geo;
  const auto row = grid.elements.row(e);
  geo.n = {row[0], row[1], row[2]};
  const Eigen::Vector2d p0 = grid.nodes.row(row[0]);
  const Eigen::Vector2d p1 = grid.nodes.row(row[1]);
  const Eigen::Vector2d p2 = grid.nodes.row(row[2]);
  geo.area = grid.areas[e];
  const double inv2a = 1.0 / (2.0 * geo.area);
  geo.grad[0] = {(p1.y() - p2.y()) * inv2a, (p2.x() - p1.x()) * inv2a};
  geo.grad[1] = {(p2.y() - p0.y()) * inv2a, (p0.x() - p2.x()) * inv2a};
  geo.grad[2] = {(p0.y() - p1.y()) * inv2a, (p1.x() - p0.x()) * inv2a};
  return geo;
}

// Mid-edge quadrature: point q sits between local nodes q and (q+1)%3, where
// the two adjacent hat functions are 1/2 and the opposite one vanishes.
constexpr int kQuadA[3] = {0, 1, 2};
constexpr int kQuadB[3] = {1, 2, 0};

SparseMatrix from_triplets(int n, std::vector<Eigen::Triplet<double>>& trips) {
  SparseMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace

SparseMatrix assemble_stiffness(const Grid& grid, const Eigen::VectorXd& coeff_per_element) {
  if (coeff_per_element.size() != grid.element_count())
    throw Error(ErrorCode::InvalidCoefficient, "coefficient length must equal element count");
  if (coeff_per_element.minCoeff() <= 0.0)
    throw Error(ErrorCode::InvalidCoefficient, "stiffness coefficient must be strictly positive");

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * grid.element_count());
  for (int e = 0; e < grid.element_count(); ++e) {
    const auto geo = element_geometry(grid, e);
    const double c = coeff_per_element[e] * geo.area;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trips.emplace_back(geo.n[i], geo.n[j], c * geo.grad[i].dot(geo.grad[j]));
  }
  return from_triplets(grid.node_count(), trips);
}

SparseMatrix assemble_stiffness(const Grid& grid, double coeff) {
  return assemble_stiffness(grid, Eigen::VectorXd::Constant(grid.element_count(), coeff));
}

SparseMatrix assemble_weighted_mass(const Grid& grid, const Eigen::VectorXd& nodal_weight) {
  if (nodal_weight.size() != grid.node_count())
    throw Error(ErrorCode::InvalidWeight, "weight length must equal node count");
  if (nodal_weight.minCoeff() < 0.0)
    throw Error(ErrorCode::InvalidWeight, "mass weight must be nonnegative");

  // int_T L_a L_b L_c = 2A a!b!c!/(a+b+c+2)! gives, for affine w = sum w_k L_k:
  //   M_ii = A (w_i/10 + (w_j + w_k)/30)
  //   M_ij = A ((w_i + w_j)/30 + w_k/60)
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * grid.element_count());
  for (int e = 0; e < grid.element_count(); ++e) {
    const auto row = grid.elements.row(e);
    const double a = grid.areas[e];
    const double w0 = nodal_weight[row[0]];
    const double w1 = nodal_weight[row[1]];
    const double w2 = nodal_weight[row[2]];
    const double d0 = a * (w0 / 10.0 + (w1 + w2) / 30.0);
    const double d1 = a * (w1 / 10.0 + (w0 + w2) / 30.0);
    const double d2 = a * (w2 / 10.0 + (w0 + w1) / 30.0);
    const double o01 = a * ((w0 + w1) / 30.0 + w2 / 60.0);
    const double o12 = a * ((w1 + w2) / 30.0 + w0 / 60.0);
    const double o02 = a * ((w0 + w2) / 30.0 + w1 / 60.0);
    trips.emplace_back(row[0], row[0], d0);
    trips.emplace_back(row[1], row[1], d1);
    trips.emplace_back(row[2], row[2], d2);
    trips.emplace_back(row[0], row[1], o01);
    trips.emplace_back(row[1], row[0], o01);
    trips.emplace_back(row[1], row[2], o12);
    trips.emplace_back(row[2], row[1], o12);
    trips.emplace_back(row[0], row[2], o02);
    trips.emplace_back(row[2], row[0], o02);
  }
  return from_triplets(grid.node_count(), trips);
}

SparseMatrix assemble_weighted_mass_elementwise(const Grid& grid,
                                                const Eigen::VectorXd& weight_per_element) {
  if (weight_per_element.size() != grid.element_count())
    throw Error(ErrorCode::InvalidWeight, "weight length must equal element count");
  if (weight_per_element.minCoeff() < 0.0)
    throw Error(ErrorCode::InvalidWeight, "mass weight must be nonnegative");

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * grid.element_count());
  for (int e = 0; e < grid.element_count(); ++e) {
    const auto row = grid.elements.row(e);
    const double a = grid.areas[e] * weight_per_element[e];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trips.emplace_back(row[i], row[j], a * (i == j ? 1.0 / 6.0 : 1.0 / 12.0));
  }
  return from_triplets(grid.node_count(), trips);
}

SparseMatrix assemble_mass(const Grid& grid) {
  return assemble_weighted_mass_elementwise(
      grid, Eigen::VectorXd::Ones(grid.element_count()));
}

Eigen::VectorXd assemble_load(const Grid& grid, const Eigen::VectorXd& f_nodal) {
  if (f_nodal.size() != grid.node_count())
    throw Error(ErrorCode::InvalidInput, "source length must equal node count");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(grid.node_count());
  for (int e = 0; e < grid.element_count(); ++e) {
    const auto row = grid.elements.row(e);
    const double w = grid.areas[e] / 12.0;  // mid-edge rule collapsed to nodal form
    const double f0 = f_nodal[row[0]];
    const double f1 = f_nodal[row[1]];
    const double f2 = f_nodal[row[2]];
    b[row[0]] += w * (2.0 * f0 + f1 + f2);
    b[row[1]] += w * (f0 + 2.0 * f1 + f2);
    b[row[2]] += w * (f0 + f1 + 2.0 * f2);
  }
  return b;
}

BoundaryData boundary_data_from_nodal(const Grid& grid, const Eigen::VectorXd& field) {
  BoundaryData d;
  d.values.resize(static_cast<int>(grid.boundary_edges.size()), 2);
  for (size_t e = 0; e < grid.boundary_edges.size(); ++e) {
    const auto& edge = grid.boundary_edges[e];
    d.values(static_cast<int>(e), 0) = field[edge.tail];
    d.values(static_cast<int>(e), 1) = field[edge.head];
  }
  return d;
}

double boundary_functional(const Grid& grid, const Eigen::VectorXd& trace_nodal,
                           const BoundaryData& g) {
  if (trace_nodal.size() != grid.node_count())
    throw Error(ErrorCode::InvalidInput, "trace field length must equal node count");
  double acc = 0.0;
  for (size_t e = 0; e < grid.boundary_edges.size(); ++e) {
    const auto& edge = grid.boundary_edges[e];
    acc += 0.5 * edge.length *
           (trace_nodal[edge.tail] * g.values(static_cast<int>(e), 0) +
            trace_nodal[edge.head] * g.values(static_cast<int>(e), 1));
  }
  return acc;
}

Eigen::VectorXd assemble_boundary_load(const Grid& grid, const BoundaryData& g) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(grid.node_count());
  for (size_t e = 0; e < grid.boundary_edges.size(); ++e) {
    const auto& edge = grid.boundary_edges[e];
    r[edge.tail] += 0.5 * edge.length * g.values(static_cast<int>(e), 0);
    r[edge.head] += 0.5 * edge.length * g.values(static_cast<int>(e), 1);
  }
  return r;
}

Eigen::VectorXd boundary_lumped_weights(const Grid& grid) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(grid.node_count());
  for (const auto& edge : grid.boundary_edges) {
    s[edge.tail] += 0.5 * edge.length;
    s[edge.head] += 0.5 * edge.length;
  }
  return s;
}

Eigen::VectorXd assemble_cubic_term(const Grid& grid, const Eigen::VectorXd& chi_per_element,
                                    const Eigen::VectorXd& u) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(grid.node_count());
  for (int e = 0; e < grid.element_count(); ++e) {
    if (chi_per_element[e] == 0.0) continue;
    const auto row = grid.elements.row(e);
    const double w = chi_per_element[e] * grid.areas[e] / 3.0;
    for (int q = 0; q < 3; ++q) {
      const int a = row[kQuadA[q]];
      const int b = row[kQuadB[q]];
      const double uq = 0.5 * (u[a] + u[b]);
      const double v = w * uq * uq * uq * 0.5;
      c[a] += v;
      c[b] += v;
    }
  }
  return c;
}

SparseMatrix assemble_cubic_hessian(const Grid& grid, const Eigen::VectorXd& chi_per_element,
                                    const Eigen::VectorXd& u) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(12 * grid.element_count());
  for (int e = 0; e < grid.element_count(); ++e) {
    if (chi_per_element[e] == 0.0) continue;
    const auto row = grid.elements.row(e);
    const double w = chi_per_element[e] * grid.areas[e] / 3.0;
    for (int q = 0; q < 3; ++q) {
      const int a = row[kQuadA[q]];
      const int b = row[kQuadB[q]];
      const double uq = 0.5 * (u[a] + u[b]);
      const double v = w * 3.0 * uq * uq * 0.25;  // phi_a = phi_b = 1/2 at q
      trips.emplace_back(a, a, v);
      trips.emplace_back(b, b, v);
      trips.emplace_back(a, b, v);
      trips.emplace_back(b, a, v);
    }
  }
  return from_triplets(grid.node_count(), trips);
}

double quartic_integral(const Grid& grid, const Eigen::VectorXd& chi_per_element,
                        const Eigen::VectorXd& u) {
  double acc = 0.0;
  for (int e = 0; e < grid.element_count(); ++e) {
    if (chi_per_element[e] == 0.0) continue;
    const auto row = grid.elements.row(e);
    const double w = chi_per_element[e] * grid.areas[e] / 3.0;
    for (int q = 0; q < 3; ++q) {
      const double uq = 0.5 * (u[row[kQuadA[q]]] + u[row[kQuadB[q]]]);
      acc += w * uq * uq * uq * uq;
    }
  }
  return acc;
}

double domain_integral(const Grid& grid, const Eigen::VectorXd& u_nodal) {
  double acc = 0.0;
  for (int e = 0; e < grid.element_count(); ++e) {
    const auto row = grid.elements.row(e);
    acc += grid.areas[e] / 3.0 * (u_nodal[row[0]] + u_nodal[row[1]] + u_nodal[row[2]]);
  }
  return acc;
}

}  // namespace monolab
