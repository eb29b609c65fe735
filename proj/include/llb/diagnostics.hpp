// Property suites and experiments: operator identities, growth/Lipschitz
// probes, energy balance, Galerkin self-convergence, small-noise
// convergence to the skeleton, and LDP slope estimates.
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "llb/field_expr.hpp"
#include "llb/skeleton.hpp"

namespace llb {

struct Metric {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::uint64_t seed = 0;
};

struct ExperimentReport {
  std::string suite;
  std::string scenario;
  std::vector<Metric> metrics;
  double runtime_s = 0.0;

  bool passed() const;
  const Metric& metric(const std::string& name) const;
  /// One JSON object per metric.
  std::vector<nlohmann::json> records() const;
};

/// Random field supported on modes with k1, k2 <= max_k; amplitudes decay
/// like (1 + lambda)^{-1} and the overall scale is log-uniform in [0.1, 10].
Field random_field(const Grid& grid, int max_k, std::uint64_t seed);

/// Prop. 3.3 items 1-8 over random fields on modes <= n/2; sample 0 is the
/// zero field. h must be resolved on the grid.
ExperimentReport identity_suite(const Grid& grid, const FieldExpression& h, int n_samples,
                                std::uint64_t seed);

enum class MarcusOperator { Phi, G, H, b };

/// Samples (l, u, v) and compares empirical growth/Lipschitz ratios with the
/// explicit constants of MarcusBounds.
ExperimentReport lipschitz_probe(MarcusOperator op, const Grid& grid, const MarcusParams& params,
                                 const LevyMeasure& nu, int samples, std::uint64_t seed);

struct EnergyReport {
  std::vector<double> times;
  std::vector<NormReport> norms;
  // Cumulative trapezoidal integrals from 0 to times[i].
  std::vector<double> grad_sq;   // int |grad m|^2
  std::vector<double> l4_pow4;   // int |m|_L4^4
  std::vector<double> l2_sq;     // int |m|^2
  std::vector<double> lap_sq;    // int |Lap m|^2
  std::vector<double> jump_delta_l2_sq;  // |m(t+)|^2 - |m(t-)|^2 per jump
  /// |m(T)|^2 + 2 int (k|grad m|^2 + c|m|^4 + d|m|^2) - |m0|^2 - sum jump deltas.
  double balance_residual = 0.0;
};

EnergyReport energy_report(const Trajectory& traj, const LlbCoefficients& coefficients = {});

/// Lemma 7.2 functional sup_{t<=tau} |Y - y|^2_L2 + int_0^tau |Y - y|^2_H1,
/// with tau the first grid time where |Y|_H1 exceeds `stop_level`.
double small_noise_functional(const Trajectory& controlled, const Trajectory& skeleton,
                              double stop_level, bool* stopped = nullptr);

struct Condition2Options {
  int n_paths = 200;
  std::uint64_t seed = 1;
  double stop_factor = 10.0;
};

ExperimentReport condition2_experiment(std::span<const double> eps_list, const Control& theta,
                                       const SolverConfig& cfg, const Field& m0,
                                       const LevyMeasure& nu, const MarcusParams& params,
                                       const Condition2Options& options);

struct TerminalEvent {
  std::string name;
  std::function<bool(const Field&)> contains;
};

struct LdpOptions {
  int n_paths = 1000;
  std::uint64_t seed = 1;
  /// Upper-bound rate estimate for the first event (e.g. from rate_function);
  /// NaN when unavailable.
  double rate_estimate = std::numeric_limits<double>::quiet_NaN();
  double margin = 0.5;
};

/// Monte Carlo estimates of P(m_eps(T) in E) for each event on common paths,
/// reporting eps log p per level.
ExperimentReport ldp_slope_experiment(std::span<const double> eps_list,
                                      std::span<const TerminalEvent> events,
                                      const SolverConfig& cfg, const Field& m0,
                                      const LevyMeasure& nu, const MarcusParams& params,
                                      const LdpOptions& options);

struct GalerkinScenario {
  int dim = 1;
  FieldExpression m0;
  FieldExpression h;
  LevyMeasure nu;
  JumpPath path;
};

/// Runs the same jump path at each mode level and reports sup_t L2 gaps
/// between consecutive levels (coarse embedded into fine).
ExperimentReport galerkin_convergence(const SolverConfig& cfg_template, std::span<const int> levels,
                                      const GalerkinScenario& scenario, std::uint64_t seed);

/// The reference 1D scenario shared by tests, the CLI default and the
/// acceptance suite.
struct Scenario {
  Grid grid;
  FieldExpression m0_expr;
  FieldExpression h_expr;
  LevyMeasure nu;
  SolverConfig cfg;
  Control theta;

  Field m0() const { return m0_expr.to_field(grid); }
  MarcusParams marcus() const {
    return MarcusParams(h_expr.evaluate(grid), MarcusMode::closed_form, 1e-3, h_expr.w1inf_bound());
  }
};

Scenario standard_scenario_1d();

}  // namespace llb
