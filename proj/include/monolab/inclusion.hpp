#pragma once

#include <Eigen/Core>
#include <vector>

#include "monolab/grid.hpp"

namespace monolab {

enum class Shape { Disk, Ellipse, Square };

/// Small low-conductivity inhomogeneity. epsilon is the disk radius, the
/// ellipse scale (semi-axes epsilon and epsilon/2, axis-aligned) or the square
/// half-side. Contrast k in (0, 1]; k = 1 degenerates to a pure reaction cutout.
struct Inclusion {
  Shape shape = Shape::Disk;
  Eigen::Vector2d center{0.5, 0.5};
  double epsilon = 0.05;
  double k = 0.5;

  bool contains(const Eigen::Vector2d& p) const;
  double bounding_radius() const;
  /// |omega| = area_factor * epsilon^2 for the analytic shape.
  double area_factor() const;
  double analytic_area() const { return area_factor() * epsilon * epsilon; }
};

double shape_area_factor(Shape shape);

/// Per-element conductivity, cubic-term indicator and inclusion ownership,
/// assigned by element-centroid membership.
struct ElementRegions {
  Eigen::VectorXd kappa;   // k inside an inclusion, 1 outside
  Eigen::VectorXd chi;     // 0 inside an inclusion, 1 outside
  Eigen::VectorXi owner;   // inclusion index or -1
  std::vector<double> inclusion_areas;  // discrete area per inclusion

  double discrete_domain_complement_area(const Grid& grid) const {
    double total = 0.0;
    for (double a : inclusion_areas) total += a;
    return grid.domain.area() - total;
  }
};

ElementRegions classify_elements(const Grid& grid, const std::vector<Inclusion>& inclusions);

/// Contrast range, boundary margin (default d0 = 0.1 * min side) and pairwise
/// disjointness; throws InvalidSpec on violation.
void validate_inclusions(const Rectangle& domain, const std::vector<Inclusion>& inclusions,
                         double d0 = -1.0);

/// Pairwise center distance >= 10 * max epsilon of the pair; throws InvalidSpec.
void require_well_separated(const std::vector<Inclusion>& inclusions);

}  // namespace monolab
