#include "monolab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace monolab {

Eigen::Vector2d Grid::centroid(int element) const {
  const auto row = elements.row(element);
  return (nodes.row(row[0]) + nodes.row(row[1]) + nodes.row(row[2])).transpose() / 3.0;
}

int Grid::nearest_node(const Eigen::Vector2d& p) const {
  const int i = std::clamp(
      static_cast<int>(std::lround((p.x() - domain.x0) / hx())), 0, nx);
  const int j = std::clamp(
      static_cast<int>(std::lround((p.y() - domain.y0) / hy())), 0, ny);
  return node_index(i, j);
}

int Grid::locate(const Eigen::Vector2d& p, Eigen::Vector3d& bary) const {
  const int ci = std::clamp(
      static_cast<int>(std::floor((p.x() - domain.x0) / hx())), 0, nx - 1);
  const int cj = std::clamp(
      static_cast<int>(std::floor((p.y() - domain.y0) / hy())), 0, ny - 1);
  const double xi = (p.x() - domain.x0) / hx() - ci;
  const double eta = (p.y() - domain.y0) / hy() - cj;
  // Lower triangle covers eta <= xi within the cell.
  const int element = 2 * (cj * nx + ci) + (eta <= xi ? 0 : 1);
  if (eta <= xi) {
    bary = {1.0 - xi, xi - eta, eta};
  } else {
    bary = {1.0 - eta, xi, eta - xi};
  }
  return element;
}

bool Grid::same_layout(const Grid& other) const {
  return nx == other.nx && ny == other.ny && domain.x0 == other.domain.x0 &&
         domain.x1 == other.domain.x1 && domain.y0 == other.domain.y0 &&
         domain.y1 == other.domain.y1;
}

Grid build_rectangle_mesh(const Rectangle& domain, int nx, int ny) {
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
    throw Error(ErrorCode::InvalidDomain, "degenerate rectangle: zero width or height");
  if (nx < 2 || ny < 2)
    throw Error(ErrorCode::InvalidDomain, "resolution must be at least 2x2 cells");

  Grid g;
  g.domain = domain;
  g.nx = nx;
  g.ny = ny;

  const double hx = domain.width() / nx;
  const double hy = domain.height() / ny;

  g.nodes.resize((nx + 1) * (ny + 1), 2);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const int id = g.node_index(i, j);
      g.nodes(id, 0) = domain.x0 + i * hx;
      g.nodes(id, 1) = domain.y0 + j * hy;
    }

  g.elements.resize(2 * nx * ny, 3);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int n00 = g.node_index(i, j);
      const int n10 = g.node_index(i + 1, j);
      const int n01 = g.node_index(i, j + 1);
      const int n11 = g.node_index(i + 1, j + 1);
      const int e = 2 * (j * nx + i);
      g.elements.row(e) << n00, n10, n11;      // lower
      g.elements.row(e + 1) << n00, n11, n01;  // upper
    }
  g.areas = Eigen::VectorXd::Constant(g.element_count(), 0.5 * hx * hy);

  // Boundary loop, counterclockwise starting at (x0, y0).
  auto push_edge = [&](int a, int b, double nxv, double nyv, double len) {
    g.boundary_nodes.push_back(a);
    g.boundary_edges.push_back({a, b, {nxv, nyv}, len});
  };
  for (int i = 0; i < nx; ++i)
    push_edge(g.node_index(i, 0), g.node_index(i + 1, 0), 0.0, -1.0, hx);
  for (int j = 0; j < ny; ++j)
    push_edge(g.node_index(nx, j), g.node_index(nx, j + 1), 1.0, 0.0, hy);
  for (int i = nx; i > 0; --i)
    push_edge(g.node_index(i, ny), g.node_index(i - 1, ny), 0.0, 1.0, hx);
  for (int j = ny; j > 0; --j)
    push_edge(g.node_index(0, j), g.node_index(0, j - 1), -1.0, 0.0, hy);

  return g;
}

ScalarField make_field(const Grid& grid, Eigen::VectorXd values) {
  if (values.size() != grid.node_count())
    throw Error(ErrorCode::InvalidInput, "field length does not match node count");
  return {&grid, std::move(values)};
}

ScalarField constant_field(const Grid& grid, double value) {
  return {&grid, Eigen::VectorXd::Constant(grid.node_count(), value)};
}

double eval_field(const Grid& grid, const Eigen::VectorXd& u, const Eigen::Vector2d& p) {
  Eigen::Vector3d bary;
  const int e = grid.locate(p, bary);
  const auto row = grid.elements.row(e);
  return bary[0] * u[row[0]] + bary[1] * u[row[1]] + bary[2] * u[row[2]];
}

Eigen::MatrixX2d element_gradients(const Grid& grid, const Eigen::VectorXd& u) {
  Eigen::MatrixX2d g(grid.element_count(), 2);
  for (int e = 0; e < grid.element_count(); ++e) {
    const auto row = grid.elements.row(e);
    const Eigen::Vector2d p0 = grid.nodes.row(row[0]);
    const Eigen::Vector2d p1 = grid.nodes.row(row[1]);
    const Eigen::Vector2d p2 = grid.nodes.row(row[2]);
    const double inv2a = 1.0 / (2.0 * grid.areas[e]);
    // grad of barycentric basis: rotated edge vectors over 2A
    const Eigen::Vector2d g0{(p1.y() - p2.y()) * inv2a, (p2.x() - p1.x()) * inv2a};
    const Eigen::Vector2d g1{(p2.y() - p0.y()) * inv2a, (p0.x() - p2.x()) * inv2a};
    const Eigen::Vector2d g2{(p0.y() - p1.y()) * inv2a, (p1.x() - p0.x()) * inv2a};
    g.row(e) = (u[row[0]] * g0 + u[row[1]] * g1 + u[row[2]] * g2).transpose();
  }
  return g;
}

Eigen::Vector2d patch_gradient(const Grid& grid, const Eigen::VectorXd& u,
                               const Eigen::Vector2d& p) {
  const int v = grid.nearest_node(p);
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  double total = 0.0;
  const Eigen::MatrixX2d grads = element_gradients(grid, u);
  for (int e = 0; e < grid.element_count(); ++e) {
    const auto row = grid.elements.row(e);
    if (row[0] == v || row[1] == v || row[2] == v) {
      acc += grid.areas[e] * grads.row(e).transpose();
      total += grid.areas[e];
    }
  }
  return acc / total;
}

Eigen::VectorXd boundary_trace(const Grid& grid, const Eigen::VectorXd& u) {
  Eigen::VectorXd t(grid.boundary_nodes.size());
  for (size_t i = 0; i < grid.boundary_nodes.size(); ++i)
    t[static_cast<int>(i)] = u[grid.boundary_nodes[i]];
  return t;
}

}  // namespace monolab
