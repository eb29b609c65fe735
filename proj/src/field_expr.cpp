#include "llb/field_expr.hpp"

#include <algorithm>
#include <cmath>

namespace llb {

Vec3d FieldExpression::value_at(double x, double y) const {
  Vec3d v = constant;
  for (const auto& t : terms) v += t.amplitude * std::cos(t.k1 * x) * std::cos(t.k2 * y);
  return v;
}

PhysField FieldExpression::evaluate(const Grid& grid) const {
  PhysField p(grid);
  for (Eigen::Index i = 0; i < grid->num_points(); ++i) {
    const auto xy = grid->point(i);
    p.values().row(i) = value_at(xy[0], xy[1]).transpose();
  }
  return p;
}

Field FieldExpression::to_field(const Grid& grid) const { return project(evaluate(grid)); }

double FieldExpression::sup_bound() const {
  double s = constant.norm();
  for (const auto& t : terms) s += t.amplitude.norm();
  return s;
}

double FieldExpression::gradient_sup_bound() const {
  double s = 0.0;
  for (const auto& t : terms)
    s += t.amplitude.norm() * std::sqrt(double(t.k1 * t.k1 + t.k2 * t.k2));
  return s;
}

int FieldExpression::max_wavenumber() const {
  int k = 0;
  for (const auto& t : terms) k = std::max({k, t.k1, t.k2});
  return k;
}

}  // namespace llb
