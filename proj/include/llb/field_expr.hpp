// Analytic R^3 fields: a constant vector plus finitely many products of
// unnormalised cosines. Used for the applied field h and initial data m0.
#pragma once

#include <vector>

#include "llb/spectral.hpp"

namespace llb {

struct CosineTerm {
  int k1 = 0;
  int k2 = 0;
  Vec3d amplitude = Vec3d::Zero();
};

struct FieldExpression {
  Vec3d constant = Vec3d::Zero();
  std::vector<CosineTerm> terms;

  static FieldExpression uniform(const Vec3d& c) { return {c, {}}; }

  Vec3d value_at(double x, double y) const;
  PhysField evaluate(const Grid& grid) const;
  /// P_n of the expression.
  Field to_field(const Grid& grid) const;
  /// Upper bound of sup |h| from the triangle inequality.
  double sup_bound() const;
  /// Upper bound of sup |grad h| (Frobenius) from the triangle inequality.
  double gradient_sup_bound() const;
  /// sup|h| + sup|grad h| bound, used as the W^{1,inf} norm.
  double w1inf_bound() const { return sup_bound() + gradient_sup_bound(); }
  /// Largest wavenumber appearing in any term.
  int max_wavenumber() const;
};

}  // namespace llb
