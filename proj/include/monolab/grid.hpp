#pragma once

#include <Eigen/Core>
#include <vector>

#include "monolab/errors.hpp"

namespace monolab {

struct Rectangle {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  double perimeter() const { return 2.0 * (width() + height()); }
  double min_side() const { return std::min(width(), height()); }
  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1;
  }
  /// Distance from an interior point to the nearest boundary side.
  double boundary_distance(const Eigen::Vector2d& p) const {
    return std::min(std::min(p.x() - x0, x1 - p.x()),
                    std::min(p.y() - y0, y1 - p.y()));
  }
};

struct BoundaryEdge {
  int tail = 0;
  int head = 0;
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();  // outward unit normal
  double length = 0.0;
};

/// Structured P1 triangulation of a rectangle. Every cell is split along its
/// bottom-left/top-right diagonal; all triangles are counterclockwise and the
/// boundary edges form one closed counterclockwise loop.
struct Grid {
  Rectangle domain;
  int nx = 0;
  int ny = 0;
  Eigen::MatrixX2d nodes;                    // one row per node
  Eigen::MatrixX3i elements;                 // node triples, CCW
  Eigen::VectorXd areas;                     // per element, all hx*hy/2
  std::vector<BoundaryEdge> boundary_edges;  // closed CCW loop
  std::vector<int> boundary_nodes;           // loop order; tail of edge i

  int node_count() const { return static_cast<int>(nodes.rows()); }
  int element_count() const { return static_cast<int>(elements.rows()); }
  double hx() const { return domain.width() / nx; }
  double hy() const { return domain.height() / ny; }
  double h() const { return std::max(hx(), hy()); }

  int node_index(int i, int j) const { return j * (nx + 1) + i; }
  Eigen::Vector2d centroid(int element) const;
  /// Nearest grid node to an arbitrary point (clamped to the domain).
  int nearest_node(const Eigen::Vector2d& p) const;
  /// Element containing p plus barycentric coordinates of p in it.
  int locate(const Eigen::Vector2d& p, Eigen::Vector3d& bary) const;

  bool same_layout(const Grid& other) const;
};

/// nx, ny >= 2 cells per direction; throws InvalidDomain on a degenerate rectangle.
Grid build_rectangle_mesh(const Rectangle& domain, int nx, int ny);

/// Nodal values of a P1 function bound to the grid they live on.
struct ScalarField {
  const Grid* grid = nullptr;
  Eigen::VectorXd values;

  int size() const { return static_cast<int>(values.size()); }
};

ScalarField make_field(const Grid& grid, Eigen::VectorXd values);
ScalarField constant_field(const Grid& grid, double value);

template <typename F>
ScalarField sample_nodal(const Grid& grid, F&& f) {
  Eigen::VectorXd v(grid.node_count());
  for (int i = 0; i < grid.node_count(); ++i)
    v[i] = f(grid.nodes(i, 0), grid.nodes(i, 1));
  return make_field(grid, std::move(v));
}

/// Value of the P1 interpolant at an arbitrary point.
double eval_field(const Grid& grid, const Eigen::VectorXd& u, const Eigen::Vector2d& p);

/// Element-constant gradients of a P1 field, one row (gx, gy) per element.
Eigen::MatrixX2d element_gradients(const Grid& grid, const Eigen::VectorXd& u);

/// Area-weighted average of element gradients over the patch of elements
/// touching the node nearest to p. P1 gradients are element-constant, so this
/// is the standard recovery of a gradient value at a point.
Eigen::Vector2d patch_gradient(const Grid& grid, const Eigen::VectorXd& u,
                               const Eigen::Vector2d& p);

/// Restriction of a nodal field to the boundary loop (grid.boundary_nodes order).
Eigen::VectorXd boundary_trace(const Grid& grid, const Eigen::VectorXd& u);

}  // namespace monolab
