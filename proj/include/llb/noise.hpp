// Poisson random measure sampling (plain, scaled, controlled), piecewise
// constant controls and their entropy cost.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "llb/levy.hpp"

namespace llb {

struct JumpEvent {
  double time = 0.0;
  double mark = 0.0;
  int atom = -1;
};

/// One realisation of the driving noise on (0, T].
struct JumpPath {
  double horizon = 0.0;
  std::vector<JumpEvent> events;

  /// Checks strictly increasing times inside (0, T].
  void validate() const;
};

/// theta(m, j) >= 0 on time cells [t_m, t_{m+1}) x atoms.
class Control {
 public:
  Control() = default;
  Control(std::vector<double> edges, Eigen::MatrixXd values);

  static Control constant(double horizon, int cells, int atoms, double value);

  const std::vector<double>& edges() const { return edges_; }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd& values() { return values_; }
  int cells() const { return static_cast<int>(values_.rows()); }
  int atoms() const { return static_cast<int>(values_.cols()); }
  double horizon() const { return edges_.back(); }
  double cell_width(int m) const { return edges_[m + 1] - edges_[m]; }

  /// Cell containing t; t == T maps to the last cell.
  int cell_at(double t) const;
  double at(double t, int atom) const { return values_(cell_at(t), atom); }
  double max_value(int atom) const { return values_.col(atom).maxCoeff(); }

  /// Splits every cell into `factor` equal subcells carrying the same value.
  Control refined(int factor) const;

 private:
  std::vector<double> edges_;
  Eigen::MatrixXd values_;
};

/// Homogeneous PRM with intensity rate_scale * nu on (0, T].
JumpPath sample_prm(const LevyMeasure& nu, double horizon, double rate_scale, std::uint64_t seed);

/// Controlled PRM with intensity eps^{-1} theta(t, l) nu(dl) dt, by thinning a
/// dominating stream of rate eps^{-1} w_j max_m theta(m, j) per atom.
JumpPath sample_controlled_prm(const LevyMeasure& nu, double horizon, double eps,
                               const Control& theta, std::uint64_t seed);

/// L_T(theta) = sum_m sum_j (t_{m+1} - t_m) w_j (theta log theta - theta + 1).
double entropy_cost(const Control& theta, const LevyMeasure& nu, double horizon);

/// theta log theta - theta + 1 with 0 log 0 := 0.
double entropy_integrand(double theta);

struct SkBoundReport {
  std::vector<double> values;
  double max = 0.0;
  bool finite = true;
};

/// int_0^T int_B f(l) |theta - 1| nu(dl) dt for each member of a family.
SkBoundReport sk_bound_probe(std::span<const Control> family, const LevyMeasure& nu,
                             double horizon, const std::function<double(double)>& f);

/// Per-path seed: splitmix64 finaliser applied to (master, index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace llb
