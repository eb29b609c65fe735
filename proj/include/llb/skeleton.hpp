// Skeleton (deterministic control) equation and rate-function estimation.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "llb/solver.hpp"

namespace llb {

/// dm = F_n(m) dt + sum_j w_j l_j (theta(t, l_j) - 1) gbar_n(m) dt.
Trajectory solve_skeleton(const SolverConfig& cfg, const Field& m0, const LevyMeasure& nu,
                          const Control& theta, const MarcusParams& params);

/// A terminal set described by a distance-like gap: zero inside the set.
struct TerminalTarget {
  std::function<double(const Field&)> gap;
  std::string description;

  /// {m : |m - target|_L2 <= delta}.
  static TerminalTarget near(Field target, double delta);
  /// {m : |m - center|_L2 >= radius}.
  static TerminalTarget outside_ball(Field center, double radius);
};

struct RateOptions {
  int cells = 4;
  double initial_penalty = 10.0;
  double penalty_growth = 10.0;
  int outer_iterations = 5;
  int max_sweeps = 200;
  double initial_step = 0.5;   // log-scale multiplicative step
  double min_step = 1e-4;
  std::optional<Control> initial;
};

struct RateTraceEntry {
  int outer = 0;
  int sweep = 0;
  double penalty = 0.0;
  double objective = 0.0;
  double cost = 0.0;
  double gap = 0.0;
};

/// Best control found over a piecewise-constant family. The cost is an
/// upper bound on the rate function restricted to that family.
struct RateResult {
  double cost = 0.0;
  Control control;
  double terminal_gap = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<RateTraceEntry> trace;
};

/// Penalty method: minimise L_T(theta) + penalty * gap(J0(theta)(T))^2 by
/// coordinate descent with multiplicative updates; penalty grows by
/// `penalty_growth` per outer iteration.
RateResult rate_function(const TerminalTarget& target, const SolverConfig& cfg, const Field& m0,
                         const LevyMeasure& nu, const MarcusParams& params,
                         const RateOptions& options = {});

/// sup_t |J0(theta_n) - J0(theta)|_L2 + (int_0^T |J0(theta_n) - J0(theta)|_H1^2 dt)^{1/2}.
struct Condition1Report {
  std::vector<double> errors;
  bool monotone = true;
};

Condition1Report condition1_probe(std::span<const Control> theta_seq, const Control& theta_limit,
                                  const SolverConfig& cfg, const Field& m0, const LevyMeasure& nu,
                                  const MarcusParams& params);

/// Distance sup_t |a - b|_L2 + (int |a - b|_H1^2)^{1/2} over shared grid snapshots.
double trajectory_distance(const Trajectory& a, const Trajectory& b);

}  // namespace llb
