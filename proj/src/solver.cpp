#include "llb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace llb {

void SolverConfig::validate() const {
  if (!grid) throw std::invalid_argument("solver config has no grid");
  if (!(horizon > 0.0)) throw std::invalid_argument("T must be > 0");
  if (!(dt > 0.0) || dt > horizon) throw std::invalid_argument("dt must lie in (0, T]");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0, 1]");
  if (snapshot_stride < 1) throw std::invalid_argument("snapshot stride must be >= 1");
  if (!(blowup_guard > 0.0)) throw std::invalid_argument("blow-up guard must be > 0");
}

std::vector<std::size_t> Trajectory::grid_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < kinds.size(); ++i)
    if (kinds[i] == SnapshotKind::grid) idx.push_back(i);
  return idx;
}

BlowUpError::BlowUpError(double time, double h1)
    : std::runtime_error("blow-up guard exceeded at t = " + std::to_string(time) +
                         " (|m|_H1 = " + std::to_string(h1) + ")"),
      time_(time),
      h1_(h1) {}

namespace {

struct Node {
  double time;
  long grid_step;  // index on the uniform grid, or -1
  int jump;        // index into jumps, or -1
};

std::vector<Node> build_nodes(const SolverConfig& cfg, std::span<const JumpEvent> jumps,
                              std::span<const double> breakpoints) {
  const double T = cfg.horizon;
  const long steps = std::max(1L, static_cast<long>(std::ceil(T / cfg.dt - 1e-9)));
  const double tol = 1e-12 * T;
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(steps) + jumps.size() + breakpoints.size() + 1);
  for (long k = 0; k <= steps; ++k) nodes.push_back({T * double(k) / double(steps), k, -1});
  for (double b : breakpoints)
    if (b > tol && b < T - tol) nodes.push_back({b, -1, -1});
  for (std::size_t i = 0; i < jumps.size(); ++i) nodes.push_back({jumps[i].time, -1, int(i)});
  std::stable_sort(nodes.begin(), nodes.end(),
                   [](const Node& a, const Node& b) { return a.time < b.time; });
  // Merge breakpoints that sit on existing nodes; jumps are never merged
  // away, they move onto the coincident node instead.
  std::vector<Node> merged;
  for (const auto& n : nodes) {
    if (!merged.empty() && std::abs(n.time - merged.back().time) <= tol) {
      auto& last = merged.back();
      if (n.grid_step >= 0) last.grid_step = n.grid_step, last.time = n.time;
      if (n.jump >= 0) {
        if (last.jump >= 0) {
          merged.push_back(n);  // two jumps at one instant: keep both, in order
          merged.back().time = last.time;
        } else {
          last.jump = n.jump;
        }
      }
      continue;
    }
    merged.push_back(n);
  }
  return merged;
}

double phi1(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }

}  // namespace

Trajectory integrate(const SolverConfig& cfg, const Field& m0, std::span<const JumpEvent> jumps,
                     std::span<const double> breakpoints, const ExtraDrift& extra,
                     const MarcusParams* marcus) {
  cfg.validate();
  if (!m0.grid()->same_layout(*cfg.grid)) throw std::invalid_argument("m0 is not on the solver grid");
  if (!jumps.empty() && marcus == nullptr)
    throw std::invalid_argument("jumps supplied without Marcus parameters");
  if (marcus && !marcus->grid()->same_layout(*cfg.grid))
    throw std::invalid_argument("h is not on the solver grid");
  for (const auto& j : jumps)
    if (!(j.time > 0.0 && j.time <= cfg.horizon)) throw std::invalid_argument("jump outside (0, T]");

  const auto nodes = build_nodes(cfg, jumps, breakpoints);
  const auto& lambda = cfg.grid->eigenvalues();
  auto nonlinear_k = cfg.coefficients;
  nonlinear_k.exchange = 0.0;
  const double kappa = cfg.coefficients.exchange;

  Trajectory traj;
  traj.eps = cfg.eps;
  Field m = m0;
  auto record = [&](double t, SnapshotKind kind) {
    traj.times.push_back(t);
    traj.snapshots.push_back(m);
    traj.kinds.push_back(kind);
  };
  record(0.0, SnapshotKind::grid);

  const long last_step = nodes.back().grid_step;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double t0 = nodes[i - 1].time;
    const double tau = nodes[i].time - t0;
    if (tau > 0.0) {
      Field drift = nonlinear_F(m, nonlinear_k);
      if (extra) extra(t0 + 0.5 * tau, m, drift);
      auto& c = m.coeffs();
      for (Eigen::Index r = 0; r < c.rows(); ++r) {
        const double z = -kappa * lambda(r) * tau;
        const double e = std::exp(z);
        if (cfg.scheme == Scheme::imex_euler)
          c.row(r) = e * (c.row(r) + tau * drift.coeffs().row(r));
        else
          c.row(r) = e * c.row(r) + (tau * phi1(z)) * drift.coeffs().row(r);
      }
      const double h1 = h1_norm(m);
      if (!(h1 <= cfg.blowup_guard)) throw BlowUpError(nodes[i].time, h1);
    }
    const auto& node = nodes[i];
    if (node.jump >= 0) {
      const auto& ev = jumps[static_cast<std::size_t>(node.jump)];
      record(node.time, SnapshotKind::pre_jump);
      JumpRecord rec{node.time, ev.mark, l2_norm(m), 0.0, m};
      m = project(phi_flow(cfg.eps, ev.mark, synthesize(m), *marcus));
      rec.post_l2 = l2_norm(m);
      traj.jumps.push_back(std::move(rec));
      record(node.time, SnapshotKind::post_jump);
      const double h1 = h1_norm(m);
      if (!(h1 <= cfg.blowup_guard)) throw BlowUpError(node.time, h1);
    }
    if (node.grid_step >= 0 &&
        (node.grid_step % cfg.snapshot_stride == 0 || node.grid_step == last_step))
      record(node.time, SnapshotKind::grid);
  }
  return traj;
}

Trajectory solve_llb_jump(const SolverConfig& cfg, const Field& m0, const LevyMeasure& nu,
                          const JumpPath& path, const MarcusParams& params) {
  cfg.validate();
  path.validate();
  if (std::abs(path.horizon - cfg.horizon) > 1e-12 * cfg.horizon)
    throw std::invalid_argument("jump path horizon differs from T");
  const double moment = nu.first_moment();
  ExtraDrift extra;
  if (moment != 0.0) {
    extra = [&](double, const Field& m, Field& drift) {
      drift += marcus_compensator_drift(cfg.eps, m, nu, params);
    };
  }
  return integrate(cfg, m0, path.events, {}, extra, &params);
}

Trajectory solve_llb_jump(const SolverConfig& cfg, const Field& m0, const LevyMeasure& nu,
                          const MarcusParams& params) {
  cfg.validate();
  const auto path = sample_prm(nu, cfg.horizon, 1.0 / cfg.eps, cfg.seed);
  return solve_llb_jump(cfg, m0, nu, path, params);
}

Field controlled_drift_terms(double eps, const Field& m, const LevyMeasure& nu,
                             std::span<const double> theta_at_t, const MarcusParams& params) {
  if (theta_at_t.size() != nu.size()) throw std::invalid_argument("theta/atom count mismatch");
  Field out = b_op(eps, m, nu, params);
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const auto& a = nu.atoms()[j];
    const Field g = g_op(eps, a.mark, m, params);
    out -= (a.weight * theta_at_t[j] / eps) * g;
    out += (a.weight * (theta_at_t[j] - 1.0) / eps) * g;
  }
  return out;
}

Trajectory solve_stochastic_control(const SolverConfig& cfg, const Field& m0,
                                    const LevyMeasure& nu, const Control& theta,
                                    const MarcusParams& params, std::uint64_t seed) {
  cfg.validate();
  const auto path = sample_controlled_prm(nu, cfg.horizon, cfg.eps, theta, seed);
  // b(eps,m) - eps^{-1} sum w theta G + eps^{-1} sum w (theta - 1) G collapses
  // to the theta-independent compensator drift; see controlled_drift_terms.
  const double moment = nu.first_moment();
  ExtraDrift extra;
  if (moment != 0.0) {
    extra = [&](double, const Field& m, Field& drift) {
      drift += marcus_compensator_drift(cfg.eps, m, nu, params);
    };
  }
  return integrate(cfg, m0, path.events, theta.edges(), extra, &params);
}

namespace {

// <drift(m), V> in weak form: exchange and gyro terms through gradients,
// using v x Lap v = div(v x grad v) and the Neumann condition.
double weak_drift_pairing(const Field& m, const Field& v, const std::vector<PhysField>& grad_v,
                          const LevyMeasure& nu, const MarcusParams& params,
                          const LlbCoefficients& k) {
  const auto& g = *m.grid();
  const auto mp = synthesize(m);
  const auto vp = synthesize(v);
  double s = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const auto gm = synthesize_gradient(m, a);
    s -= k.exchange * inner(gm, grad_v[static_cast<std::size_t>(a)]);
    s -= k.gyro * inner(cross(mp, gm), grad_v[static_cast<std::size_t>(a)]);
  }
  const auto factor = (k.damping + k.cubic * mp.values().rowwise().squaredNorm().array()).eval();
  PhysField damp(m.grid(), (mp.values().array().colwise() * factor).matrix());
  s -= inner(damp, vp);
  const double moment = nu.first_moment();
  if (moment != 0.0) {
    auto gb = cross(mp, params.h);
    gb += params.h;
    s -= moment * inner(gb, vp);
  }
  return s;
}

}  // namespace

double weak_form_residual(const Trajectory& traj, const Field& test, const LevyMeasure& nu,
                          const MarcusParams& params, const LlbCoefficients& coefficients) {
  if (traj.snapshots.empty()) throw std::invalid_argument("empty trajectory");
  std::vector<PhysField> grad_v;
  for (int a = 0; a < test.grid()->dim(); ++a) grad_v.push_back(synthesize_gradient(test, a));

  double integral = 0.0;
  double prev_val = weak_drift_pairing(traj.snapshots.front(), test, grad_v, nu, params, coefficients);
  for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
    const double dt = traj.times[i] - traj.times[i - 1];
    const double val = weak_drift_pairing(traj.snapshots[i], test, grad_v, nu, params, coefficients);
    if (dt > 0.0) integral += 0.5 * dt * (prev_val + val);
    prev_val = val;
  }
  double jump_sum = 0.0;
  for (const auto& j : traj.jumps) jump_sum += inner(g_op(traj.eps, j.mark, j.pre, params), test);

  const double lhs = inner(traj.terminal(), test);
  const double rhs = inner(traj.snapshots.front(), test) + integral + jump_sum;
  return std::abs(lhs - rhs);
}

}  // namespace llb
