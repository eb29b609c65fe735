#include "llb/skeleton.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace llb {

Trajectory solve_skeleton(const SolverConfig& cfg, const Field& m0, const LevyMeasure& nu,
                          const Control& theta, const MarcusParams& params) {
  if (theta.atoms() != static_cast<int>(nu.size()))
    throw std::invalid_argument("control/measure atom count mismatch");
  if (std::abs(theta.horizon() - cfg.horizon) > 1e-12 * cfg.horizon)
    throw std::invalid_argument("control grid does not cover [0, T]");
  ExtraDrift extra = [&](double t, const Field& m, Field& drift) {
    const int cell = theta.cell_at(t);
    double coeff = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
      const auto& a = nu.atoms()[j];
      coeff += a.weight * a.mark * (theta.values()(cell, static_cast<Eigen::Index>(j)) - 1.0);
    }
    if (coeff != 0.0) drift += coeff * gbar(m, params.h);
  };
  return integrate(cfg, m0, {}, theta.edges(), extra, nullptr);
}

TerminalTarget TerminalTarget::near(Field target, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("target tolerance must be >= 0");
  return {[target = std::move(target), delta](const Field& m) {
            return std::max(0.0, l2_norm(m - target) - delta);
          },
          "near(delta=" + std::to_string(delta) + ")"};
}

TerminalTarget TerminalTarget::outside_ball(Field center, double radius) {
  return {[center = std::move(center), radius](const Field& m) {
            return std::max(0.0, radius - l2_norm(m - center));
          },
          "outside_ball(radius=" + std::to_string(radius) + ")"};
}

namespace {

struct Evaluation {
  double objective;
  double cost;
  double gap;
};

}  // namespace

RateResult rate_function(const TerminalTarget& target, const SolverConfig& cfg, const Field& m0,
                         const LevyMeasure& nu, const MarcusParams& params,
                         const RateOptions& options) {
  if (nu.empty()) throw std::invalid_argument("rate_function needs a nonempty Levy measure");
  Control theta = options.initial.value_or(
      Control::constant(cfg.horizon, options.cells, static_cast<int>(nu.size()), 1.0));
  // Strictly positive start keeps multiplicative updates meaningful.
  theta.values() = theta.values().cwiseMax(1e-8);

  auto evaluate = [&](const Control& c, double penalty) {
    const double cost = entropy_cost(c, nu, cfg.horizon);
    double gap;
    try {
      gap = target.gap(solve_skeleton(cfg, m0, nu, c, params).terminal());
    } catch (const BlowUpError&) {
      return Evaluation{std::numeric_limits<double>::infinity(), cost,
                        std::numeric_limits<double>::infinity()};
    }
    return Evaluation{cost + penalty * gap * gap, cost, gap};
  };

  RateResult result;
  double penalty = options.initial_penalty;
  Evaluation current{};
  for (int outer = 0; outer < options.outer_iterations; ++outer) {
    current = evaluate(theta, penalty);
    double step = options.initial_step;
    int sweep = 0;
    for (; sweep < options.max_sweeps && step >= options.min_step; ++sweep) {
      bool improved = false;
      for (int m = 0; m < theta.cells(); ++m) {
        for (int j = 0; j < theta.atoms(); ++j) {
          const double base = theta.values()(m, j);
          // Fixed candidate order: up, down, and the theta = 0 boundary.
          const double candidates[] = {base * std::exp(step), base * std::exp(-step), 0.0};
          double best_value = base;
          Evaluation best = current;
          for (double cand : candidates) {
            theta.values()(m, j) = cand;
            const auto e = evaluate(theta, penalty);
            if (e.objective < best.objective) {
              best = e;
              best_value = cand;
            }
          }
          theta.values()(m, j) = best_value;
          if (best_value != base) {
            current = best;
            improved = true;
          }
        }
      }
      ++result.iterations;
      result.trace.push_back({outer, sweep, penalty, current.objective, current.cost, current.gap});
      if (!improved) step *= 0.5;
    }
    result.converged = step < options.min_step;
    penalty *= options.penalty_growth;
  }
  // A zero entry can only leave via the explicit boundary candidate; values
  // stuck at the 1e-8 floor are reported as they are.
  result.control = theta;
  result.cost = current.cost;
  result.terminal_gap = current.gap;
  result.objective = current.objective;
  return result;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
  const auto ia = a.grid_indices();
  const auto ib = b.grid_indices();
  if (ia.size() != ib.size()) throw std::invalid_argument("trajectories have different grids");
  double sup_l2 = 0.0;
  double h1_int = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < ia.size(); ++k) {
    const Field d = a.snapshots[ia[k]] - b.snapshots[ib[k]];
    sup_l2 = std::max(sup_l2, l2_norm(d));
    const double h1sq = std::pow(h1_norm(d), 2);
    if (k > 0) h1_int += 0.5 * (a.times[ia[k]] - a.times[ia[k - 1]]) * (prev + h1sq);
    prev = h1sq;
  }
  return sup_l2 + std::sqrt(h1_int);
}

Condition1Report condition1_probe(std::span<const Control> theta_seq, const Control& theta_limit,
                                  const SolverConfig& cfg, const Field& m0, const LevyMeasure& nu,
                                  const MarcusParams& params) {
  const auto limit = solve_skeleton(cfg, m0, nu, theta_limit, params);
  Condition1Report report;
  for (const auto& theta : theta_seq) {
    const auto traj = solve_skeleton(cfg, m0, nu, theta, params);
    const double e = trajectory_distance(traj, limit);
    if (!report.errors.empty() && e > report.errors.back()) report.monotone = false;
    report.errors.push_back(e);
  }
  return report;
}

}  // namespace llb
