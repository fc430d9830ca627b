#include "monolab/inclusion.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace monolab {

bool Inclusion::contains(const Eigen::Vector2d& p) const {
  const Eigen::Vector2d d = p - center;
  switch (shape) {
    case Shape::Disk:
      return d.squaredNorm() <= epsilon * epsilon;
    case Shape::Ellipse: {
      const double a = epsilon;
      const double b = 0.5 * epsilon;
      return (d.x() / a) * (d.x() / a) + (d.y() / b) * (d.y() / b) <= 1.0;
    }
    case Shape::Square:
      return std::abs(d.x()) <= epsilon && std::abs(d.y()) <= epsilon;
  }
  return false;
}

double Inclusion::bounding_radius() const {
  switch (shape) {
    case Shape::Disk:
    case Shape::Ellipse:
      return epsilon;
    case Shape::Square:
      return epsilon * std::numbers::sqrt2;
  }
  return epsilon;
}

double Inclusion::area_factor() const { return shape_area_factor(shape); }

double shape_area_factor(Shape shape) {
  switch (shape) {
    case Shape::Disk:
      return std::numbers::pi;
    case Shape::Ellipse:
      return 0.5 * std::numbers::pi;
    case Shape::Square:
      return 4.0;
  }
  return 0.0;
}

ElementRegions classify_elements(const Grid& grid, const std::vector<Inclusion>& inclusions) {
  ElementRegions r;
  r.kappa = Eigen::VectorXd::Ones(grid.element_count());
  r.chi = Eigen::VectorXd::Ones(grid.element_count());
  r.owner = Eigen::VectorXi::Constant(grid.element_count(), -1);
  r.inclusion_areas.assign(inclusions.size(), 0.0);
  for (int e = 0; e < grid.element_count(); ++e) {
    const Eigen::Vector2d c = grid.centroid(e);
    for (size_t l = 0; l < inclusions.size(); ++l) {
      if (inclusions[l].contains(c)) {
        r.kappa[e] = inclusions[l].k;
        r.chi[e] = 0.0;
        r.owner[e] = static_cast<int>(l);
        r.inclusion_areas[l] += grid.areas[e];
        break;
      }
    }
  }
  return r;
}

void validate_inclusions(const Rectangle& domain, const std::vector<Inclusion>& inclusions,
                         double d0) {
  if (d0 < 0.0) d0 = 0.1 * domain.min_side();
  for (size_t l = 0; l < inclusions.size(); ++l) {
    const auto& inc = inclusions[l];
    const std::string tag = "inclusions[" + std::to_string(l) + "]";
    if (!(inc.k > 0.0) || inc.k > 1.0)
      throw Error(ErrorCode::InvalidSpec, tag + ".k must lie in (0, 1]");
    if (!(inc.epsilon > 0.0))
      throw Error(ErrorCode::InvalidSpec, tag + ".epsilon must be positive");
    if (!domain.contains(inc.center))
      throw Error(ErrorCode::InvalidSpec, tag + ".center lies outside the domain");
    if (domain.boundary_distance(inc.center) - inc.bounding_radius() < d0)
      throw Error(ErrorCode::InvalidSpec,
                  tag + " is closer than d0 to the domain boundary");
  }
  for (size_t a = 0; a < inclusions.size(); ++a)
    for (size_t b = a + 1; b < inclusions.size(); ++b) {
      const double dist = (inclusions[a].center - inclusions[b].center).norm();
      if (dist <= inclusions[a].bounding_radius() + inclusions[b].bounding_radius())
        throw Error(ErrorCode::InvalidSpec, "inclusions " + std::to_string(a) + " and " +
                                                std::to_string(b) + " overlap");
    }
}

void require_well_separated(const std::vector<Inclusion>& inclusions) {
  for (size_t a = 0; a < inclusions.size(); ++a)
    for (size_t b = a + 1; b < inclusions.size(); ++b) {
      const double dist = (inclusions[a].center - inclusions[b].center).norm();
      const double req = 10.0 * std::max(inclusions[a].epsilon, inclusions[b].epsilon);
      if (dist < req)
        throw Error(ErrorCode::InvalidSpec,
                    "inclusions " + std::to_string(a) + " and " + std::to_string(b) +
                        " are not well separated (need 10 epsilon)");
    }
}

}  // namespace monolab
