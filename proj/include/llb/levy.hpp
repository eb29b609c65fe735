// Finite-activity Levy measures on B = [-1, 1] \ {0}.
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace llb {

struct Atom {
  double mark = 0.0;
  double weight = 0.0;
};

/// nu = sum_j w_j delta_{l_j}, with 0 < |l_j| <= 1, w_j > 0, marks distinct.
class LevyMeasure {
 public:
  LevyMeasure() = default;
  explicit LevyMeasure(std::vector<Atom> atoms);

  /// Discretises a density on B by the composite midpoint rule with
  /// `nodes_per_side` cells on each of (-1, 0) and (0, 1). Densities whose
  /// mass does not converge under refinement (infinite activity) are
  /// rejected.
  static LevyMeasure from_density(const std::function<double(double)>& density,
                                  int nodes_per_side);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  double mass() const;
  double first_moment() const;
  double second_moment() const;

  /// The intensity eps^{-1} nu of the eps-scaled noise.
  LevyMeasure scaled(double factor) const;

 private:
  std::vector<Atom> atoms_;
};

}  // namespace llb
