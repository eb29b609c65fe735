// Jump-adapted integration of the Galerkin LLB system.
//
// The Laplacian is propagated exactly in spectral space; the remaining drift
// is explicit first order (integrating-factor Euler or ETD1). Jumps are
// applied at their exact times through the Marcus map.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "llb/marcus.hpp"
#include "llb/noise.hpp"
#include "llb/spectral.hpp"

namespace llb {

enum class Scheme { imex_euler, etd1 };

struct SolverConfig {
  Grid grid;
  double horizon = 1.0;
  double dt = 1e-3;
  double eps = 1.0;
  Scheme scheme = Scheme::etd1;
  int snapshot_stride = 1;
  std::uint64_t seed = 0;
  double blowup_guard = 1e6;
  LlbCoefficients coefficients;

  void validate() const;
};

enum class SnapshotKind { grid, pre_jump, post_jump };

struct JumpRecord {
  double time = 0.0;
  double mark = 0.0;
  double pre_l2 = 0.0;
  double post_l2 = 0.0;
  Field pre;
};

struct Trajectory {
  double eps = 1.0;
  std::vector<double> times;
  std::vector<Field> snapshots;
  std::vector<SnapshotKind> kinds;
  std::vector<JumpRecord> jumps;

  const Field& terminal() const { return snapshots.back(); }
  /// Indices of the uniform-grid snapshots, in time order.
  std::vector<std::size_t> grid_indices() const;
};

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, double h1);
  double time() const { return time_; }
  double h1() const { return h1_; }

 private:
  double time_;
  double h1_;
};

/// Adds a model-specific drift contribution at time t into `drift`.
using ExtraDrift = std::function<void(double t, const Field& m, Field& drift)>;

/// Shared stepper: uniform steps of cfg.dt, refined at `breakpoints` and
/// jump times. `marcus` may be null when `jumps` is empty.
Trajectory integrate(const SolverConfig& cfg, const Field& m0, std::span<const JumpEvent> jumps,
                     std::span<const double> breakpoints, const ExtraDrift& extra,
                     const MarcusParams* marcus);

/// Stochastic LLB with Marcus jump noise along a given path.
Trajectory solve_llb_jump(const SolverConfig& cfg, const Field& m0, const LevyMeasure& nu,
                          const JumpPath& path, const MarcusParams& params);

/// As above with the path sampled from eps^{-1} nu using cfg.seed.
Trajectory solve_llb_jump(const SolverConfig& cfg, const Field& m0, const LevyMeasure& nu,
                          const MarcusParams& params);

/// Stochastic control equation: jumps from the controlled PRM, drift from
/// b(eps, m), the compensated controlled integral and the control shift.
Trajectory solve_stochastic_control(const SolverConfig& cfg, const Field& m0,
                                    const LevyMeasure& nu, const Control& theta,
                                    const MarcusParams& params, std::uint64_t seed);

/// Drift of the controlled equation assembled term by term:
/// b(eps,m) - eps^{-1} sum_j w_j theta_j G_j + eps^{-1} sum_j w_j (theta_j - 1) G_j.
Field controlled_drift_terms(double eps, const Field& m, const LevyMeasure& nu,
                             std::span<const double> theta_at_t, const MarcusParams& params);

/// Gap between both sides of the weak formulation at t = T for test field V,
/// using gradient pairings, trapezoidal time quadrature and exact jump sums.
double weak_form_residual(const Trajectory& traj, const Field& test, const LevyMeasure& nu,
                          const MarcusParams& params, const LlbCoefficients& coefficients = {});

}  // namespace llb
