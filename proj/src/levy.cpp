#include "llb/levy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace llb {

LevyMeasure::LevyMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (!std::isfinite(a.mark) || a.mark == 0.0 || std::abs(a.mark) > 1.0)
      throw std::invalid_argument("Levy atom mark must lie in [-1,1]\\{0}, got " +
                                  std::to_string(a.mark));
    if (!std::isfinite(a.weight) || a.weight <= 0.0)
      throw std::invalid_argument("Levy atom weight must be positive and finite");
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    for (std::size_t j = i + 1; j < atoms_.size(); ++j)
      if (atoms_[i].mark == atoms_[j].mark)
        throw std::invalid_argument("Levy atoms must have distinct marks");
}

namespace {

std::vector<Atom> midpoint_atoms(const std::function<double(double)>& density, int nodes) {
  std::vector<Atom> atoms;
  const double h = 1.0 / nodes;
  for (int side : {-1, 1}) {
    for (int i = 0; i < nodes; ++i) {
      const double l = side * (i + 0.5) * h;
      const double d = density(l);
      if (!std::isfinite(d) || d < 0.0)
        throw std::invalid_argument("Levy density must be finite and nonnegative on B");
      if (d > 0.0) atoms.push_back({l, d * h});
    }
  }
  return atoms;
}

double total(const std::vector<Atom>& atoms) {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

}  // namespace

LevyMeasure LevyMeasure::from_density(const std::function<double(double)>& density,
                                      int nodes_per_side) {
  if (nodes_per_side < 1) throw std::invalid_argument("quadrature_nodes must be >= 1");
  // Richardson-style divergence check: for an integrable density the mass
  // increments shrink geometrically under doubling; a nonintegrable
  // singularity at 0 gives ratios >= 1.
  const double m1 = total(midpoint_atoms(density, nodes_per_side));
  const double m2 = total(midpoint_atoms(density, 2 * nodes_per_side));
  const double m4 = total(midpoint_atoms(density, 4 * nodes_per_side));
  const double d1 = std::abs(m2 - m1);
  const double d2 = std::abs(m4 - m2);
  if (d2 > 1e-9 * std::max(1.0, m4) && d2 >= 0.9 * d1)
    throw std::invalid_argument(
        "Levy density mass does not converge under refinement (infinite activity is "
        "not supported)");
  return LevyMeasure(midpoint_atoms(density, nodes_per_side));
}

double LevyMeasure::mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

double LevyMeasure::first_moment() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight * a.mark;
  return s;
}

double LevyMeasure::second_moment() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight * a.mark * a.mark;
  return s;
}

LevyMeasure LevyMeasure::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("Levy measure scale must be positive");
  auto atoms = atoms_;
  for (auto& a : atoms) a.weight *= factor;
  return LevyMeasure(std::move(atoms));
}

}  // namespace llb
