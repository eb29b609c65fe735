// Acceptance suite: one PASS/FAIL line per criterion.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "llb/diagnostics.hpp"
#include "support.hpp"

using namespace llb;
namespace lt = llb::testing;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  fmt::print("{} [{:2d}] {}: {}\n", pass ? "PASS" : "FAIL", id, title, detail);
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool identity_items_pass(const ExperimentReport& r, double* worst) {
  bool ok = true;
  for (const char* name : {"item1", "item2", "item3", "item5", "item6"}) {
    const auto& m = r.metric(name);
    *worst = std::max(*worst, m.value);
    ok = ok && m.value <= 1e-10;
  }
  return ok && r.passed();
}

void criterion_identities() {
  const auto t0 = std::chrono::steady_clock::now();
  FieldExpression h1d{Vec3d(0.1, -0.2, 0.6), {{1, 0, Vec3d(0.3, 0.0, 0.1)}, {3, 0, Vec3d(0.0, 0.2, 0.0)}}};
  FieldExpression h2d{Vec3d(0.0, 0.1, 0.5), {{1, 1, Vec3d(0.2, 0.0, 0.1)}, {0, 2, Vec3d(0.0, 0.3, 0.0)}}};
  double worst = 0.0;
  const bool ok1 = identity_items_pass(identity_suite(build_grid<double>(1, 32, 64), h1d, 200, 11), &worst);
  const bool ok2 = identity_items_pass(identity_suite(build_grid<double>(2, 16, 32), h2d, 200, 12), &worst);
  const double rt = seconds(t0);
  report(1, "operator identities", ok1 && ok2 && rt < 10.0,
         fmt::format("max relative error {:.3g} over 2x200 fields, runtime {:.2f} s", worst, rt));
}

void criterion_marcus_oracle() {
  const auto grid = build_grid<double>(1, 8, 16);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_rk4 = 0.0, worst_group = 0.0, worst_scale = 0.0;
  for (int s = 0; s < 100; ++s) {
    FieldExpression h{Vec3d(u(rng), u(rng), u(rng)), {}};
    if (s % 2 == 1) h.terms = {{1, 0, Vec3d(u(rng), u(rng), u(rng))}, {2, 0, Vec3d(u(rng), u(rng), u(rng))}};
    const MarcusParams closed(h.evaluate(grid));
    const MarcusParams rk4(h.evaluate(grid), MarcusMode::rk4, 1e-3);
    double l = 0.0;
    while (l == 0.0) l = u(rng);
    const PhysField x = synthesize(random_field(grid, 7, rng()));
    const double t = 0.5 * (u(rng) + 1.0);
    const double a = 0.5 * (u(rng) + 1.0), b = 0.5 * (u(rng) + 1.0);
    const auto pc = phi_flow(t, l, x, closed);
    worst_rk4 = std::max(worst_rk4, (pc.values() - phi_flow(t, l, x, rk4).values()).cwiseAbs().maxCoeff());
    // Independent oracle on the first point as well.
    const Vec3d y = lt::rk4_marcus_point(t, l, x.values().row(0).transpose(), closed.h.values().row(0).transpose(), 1e-3);
    worst_rk4 = std::max(worst_rk4, (pc.values().row(0).transpose() - y).cwiseAbs().maxCoeff());
    const auto whole = phi_flow(a + b, l, x, closed);
    const auto composed = phi_flow(a, l, phi_flow(b, l, x, closed), closed);
    worst_group = std::max(worst_group, (whole.values() - composed.values()).cwiseAbs().maxCoeff());
    worst_scale = std::max(worst_scale,
                           (phi_flow(t, l, x, closed).values() - phi_flow(1.0, t * l, x, closed).values()).cwiseAbs().maxCoeff());
  }
  report(2, "Marcus flow oracle", worst_rk4 <= 1e-8 && worst_group <= 1e-9 && worst_scale <= 1e-12,
         fmt::format("RK4 gap {:.3g}, semigroup {:.3g}, eps-scaling {:.3g}", worst_rk4, worst_group, worst_scale));
}

void criterion_lipschitz() {
  const auto s = standard_scenario_1d();
  const auto params = s.marcus();
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 31;
  for (auto op : {MarcusOperator::Phi, MarcusOperator::G, MarcusOperator::H, MarcusOperator::b}) {
    const auto r = lipschitz_probe(op, s.grid, params, s.nu, 500, seed++);
    ok = ok && r.passed();
    for (const auto& m : r.metrics) detail += fmt::format("{}={:.3f} ", m.name, m.value);
  }
  report(3, "growth/Lipschitz constants", ok, detail + "(ratios to explicit constants)");
}

void criterion_decay() {
  SolverConfig cfg;
  cfg.grid = build_grid<double>(1, 4, 8);
  cfg.dt = 1e-4;
  const Field m0 = FieldExpression::uniform(Vec3d(0.6, 0.0, 0.8)).to_field(cfg.grid);
  const auto traj = integrate(cfg, m0, {}, {}, {}, nullptr);
  const double r = pointwise_norm(synthesize(traj.terminal())).maxCoeff();
  const double rmin = pointwise_norm(synthesize(traj.terminal())).minCoeff();
  report(4, "deterministic decay oracle", std::abs(r - 0.26943) <= 1e-4 && r - rmin < 1e-12,
         fmt::format("|m(1)| = {:.6f}, closed form {:.6f}", r, lt::decay_oracle(1.0, 1.0)));
}

void criterion_energy() {
  const auto s = standard_scenario_1d();
  std::vector<double> res;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    auto cfg = s.cfg;
    cfg.dt = dt;
    res.push_back(std::abs(energy_report(integrate(cfg, s.m0(), {}, {}, {}, nullptr)).balance_residual));
  }
  const double r1 = res[0] / res[1], r2 = res[1] / res[2];
  report(5, "energy identity residual", std::abs(r1 - 2.0) <= 0.4 && std::abs(r2 - 2.0) <= 0.4,
         fmt::format("residuals {:.3e} {:.3e} {:.3e}, ratios {:.3f} {:.3f}", res[0], res[1], res[2], r1, r2));
}

void criterion_determinism() {
  const auto s = standard_scenario_1d();
  const auto params = s.marcus();
  auto cfg = s.cfg;
  cfg.seed = 99;
  cfg.eps = 0.2;
  const auto a = solve_llb_jump(cfg, s.m0(), s.nu, params);
  const auto b = solve_llb_jump(cfg, s.m0(), s.nu, params);
  bool identical = a.snapshots.size() == b.snapshots.size() && a.times == b.times;
  for (std::size_t i = 0; identical && i < a.snapshots.size(); ++i) {
    const auto& ca = a.snapshots[i].coeffs();
    const auto& cb = b.snapshots[i].coeffs();
    identical = std::memcmp(ca.data(), cb.data(), sizeof(double) * std::size_t(ca.size())) == 0;
  }
  const auto path = sample_prm(s.nu, cfg.horizon, 1.0 / cfg.eps, cfg.seed);
  const Field dir = random_field(s.grid, 7, 5);
  const Field unit = (1.0 / l2_norm(dir)) * dir;
  const auto base = solve_llb_jump(cfg, s.m0(), s.nu, path, params);
  auto divergence = [&](double delta) {
    const auto p = solve_llb_jump(cfg, s.m0() + delta * unit, s.nu, path, params);
    std::vector<double> d;
    for (std::size_t i = 0; i < p.snapshots.size(); ++i) d.push_back(l2_norm(p.snapshots[i] - base.snapshots[i]));
    return d;
  };
  const auto fit = divergence(1e-6);
  double c_hat = -INFINITY;
  for (std::size_t i = 1; i < fit.size(); ++i)
    if (base.times[i] > 0.0) c_hat = std::max(c_hat, std::log(fit[i] / 1e-6) / base.times[i]);
  bool bounded = true;
  double worst = 0.0;
  for (double delta : {1e-4, 1e-6, 1e-8}) {
    const auto d = divergence(delta);
    double sup = 0.0, scaled = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      sup = std::max(sup, d[i]);
      scaled = std::max(scaled, d[i] * std::exp(-c_hat * base.times[i]) / delta);
    }
    worst = std::max(worst, scaled);
    bounded = bounded && scaled <= 1.01 && sup <= std::exp(std::max(c_hat, 0.0) * cfg.horizon) * delta * 1.01;
  }
  report(6, "determinism and stability", identical && bounded,
         fmt::format("byte-identical={}, {} jumps, fitted C = {:.4f}, max d(t)e^(-Ct)/delta = {:.4f}", identical,
                     path.events.size(), c_hat, worst));
}

void criterion_skeleton_equivalence() {
  const auto s = standard_scenario_1d();
  const auto params = s.marcus();
  const auto sk = solve_skeleton(s.cfg, s.m0(), s.nu, Control::constant(1.0, 4, 2, 1.0), params);
  const auto plain = solve_llb_jump(s.cfg, s.m0(), LevyMeasure{}, JumpPath{1.0, {}}, params);
  double worst = sk.snapshots.size() == plain.snapshots.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; std::isfinite(worst) && i < sk.snapshots.size(); ++i)
    worst = std::max(worst, (sk.snapshots[i].coeffs() - plain.snapshots[i].coeffs()).cwiseAbs().maxCoeff());
  report(7, "skeleton with theta = 1 equals noise-free solver", worst <= 1e-12,
         fmt::format("max coefficient gap {:.3g} over {} snapshots", worst, sk.snapshots.size()));
}

void criterion_condition1() {
  const auto s = standard_scenario_1d();
  std::vector<Control> seq;
  std::string list;
  for (int n = 1; n <= 64; n *= 2) {
    Control c = s.theta;
    c.values() = (1.0 + (s.theta.values().array() - 1.0) / double(n)).matrix();
    seq.push_back(c);
  }
  const Control limit = Control::constant(1.0, s.theta.cells(), s.theta.atoms(), 1.0);
  const auto r = condition1_probe(seq, limit, s.cfg, s.m0(), s.nu, s.marcus());
  for (double e : r.errors) list += fmt::format("{:.3e} ", e);
  report(8, "Condition 1 probe", r.monotone && r.errors.back() < 1e-3, "errors n=1..64: " + list);
}

void criterion_condition2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = standard_scenario_1d();
  const std::vector<double> eps{0.1, 0.05, 0.025};
  Condition2Options opt;
  opt.n_paths = 200;
  opt.seed = 2025;
  const auto r = condition2_experiment(eps, s.theta, s.cfg, s.m0(), s.nu, s.marcus(), opt);
  std::string detail;
  for (const auto& m : r.metrics)
    if (m.name == "mean_functional")
      detail += fmt::format("eps={} mean={:.4e}+-{:.1e} ", m.params["eps"].get<double>(), m.value,
                            m.params["stderr"].get<double>());
  const double rt = seconds(t0);
  report(9, "Condition 2 experiment", r.passed() && rt < 600.0, detail + fmt::format("runtime {:.1f} s", rt));
}

void criterion_entropy_and_rate() {
  const LevyMeasure nu({{0.5, 0.25}, {-0.75, 0.75}});
  const double cost = entropy_cost(Control::constant(1.0, 3, 2, 2.0), nu, 1.0);
  const double exact = 2.0 * std::log(2.0) - 1.0;

  auto s = standard_scenario_1d();
  s.cfg.dt = 1e-2;
  const auto params = s.marcus();
  const auto det = solve_skeleton(s.cfg, s.m0(), s.nu, Control::constant(1.0, 4, 2, 1.0), params);
  const auto rate = rate_function(TerminalTarget::near(det.terminal(), 0.01), s.cfg, s.m0(), s.nu, params);
  const bool unit = (rate.control.values().array() == 1.0).all();
  report(10, "entropy cost and zero-cost rate", std::abs(cost - exact) <= 1e-12 && rate.cost <= 1e-9 && unit,
         fmt::format("L_T = {:.15f} (exact {:.15f}), rate cost {:.3g}, theta* = 1: {}", cost, exact, rate.cost, unit));
}

void criterion_sk_bound() {
  const LevyMeasure nu({{0.9, 0.3}, {0.2, 1.1}, {-0.4, 0.6}, {-1.0, 0.2}});
  const double T = 1.0, K = 1.0;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 1.5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Control> family;
  for (int s = 0; s < 100; ++s) {
    const int cells = 1 + int(rng() % 8);
    Control c = Control::constant(T, cells, int(nu.size()), 1.0);
    for (int m = 0; m < cells; ++m)
      for (int j = 0; j < int(nu.size()); ++j) c.values()(m, j) = unif(rng) < 0.05 ? 0.0 : std::exp(g(rng));
    // Pull towards theta = 1 until the cost is at most K.
    const Eigen::MatrixXd raw = c.values();
    double lo = 0.0, hi = 1.0, budget = K * unif(rng);
    auto at = [&](double t) {
      Control d = c;
      d.values() = (1.0 + t * (raw.array() - 1.0)).matrix();
      return d;
    };
    if (entropy_cost(c, nu, T) > budget) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (entropy_cost(at(mid), nu, T) > budget ? hi : lo) = mid;
      }
      c = at(lo);
    }
    family.push_back(c);
  }
  const auto f = [](double l) { return std::abs(l); };
  const auto probe = sk_bound_probe(family, nu, T, f);
  double worst = 0.0, max_cost = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    max_cost = std::max(max_cost, entropy_cost(family[i], nu, T));
    // Dense midpoint quadrature in time; 840 is divisible by every cell count used.
    const int nt = 840 * 50;
    double oracle = 0.0;
    for (int k = 0; k < nt; ++k) {
      const double t = (k + 0.5) * T / nt;
      for (std::size_t j = 0; j < nu.size(); ++j)
        oracle += T / nt * nu.atoms()[j].weight * f(nu.atoms()[j].mark) *
                  std::abs(family[i].at(t, int(j)) - 1.0);
    }
    worst = std::max(worst, std::abs(oracle - probe.values[i]));
  }
  report(11, "S^K integrability probe", probe.finite && worst <= 1e-10 && max_cost <= K + 1e-12,
         fmt::format("max value {:.4f}, max |probe - oracle| {:.3g}, max cost {:.4f}", probe.max, worst, max_cost));
}

struct PoissonCheck {
  double z_mean;
  double z_var;
  double ks;
  double ks_crit;
};

PoissonCheck poisson_check(const std::function<JumpPath(std::uint64_t)>& sample, double mu,
                           const std::function<double(double)>& cumulative_rate, double T) {
  const int n = 10000;
  std::vector<double> counts, first;
  for (int i = 0; i < n; ++i) {
    const auto p = sample(derive_seed(1, std::uint64_t(i)));
    counts.push_back(double(p.events.size()));
    if (!p.events.empty()) first.push_back(p.events.front().time);
  }
  double mean = 0.0;
  for (double c : counts) mean += c;
  mean /= n;
  double var = 0.0;
  for (double c : counts) var += (c - mean) * (c - mean);
  var /= n - 1;
  const double total = cumulative_rate(T);
  const double ks = lt::ks_statistic(first, [&](double t) {
    return -std::expm1(-cumulative_rate(t)) / -std::expm1(-total);
  });
  return {(mean - mu) / std::sqrt(mu / n), (var - mu) / std::sqrt((mu + 2.0 * mu * mu) / n), ks,
          lt::ks_critical_001(first.size())};
}

void criterion_poisson() {
  const LevyMeasure nu({{0.5, 0.5}, {-0.5, 0.25}, {1.0, 0.4}});
  const double T = 1.0;
  const double mass = nu.mass();
  std::vector<std::pair<std::string, PoissonCheck>> checks;
  checks.emplace_back("plain", poisson_check([&](std::uint64_t s) { return sample_prm(nu, T, 1.0, s); }, mass,
                                             [&](double t) { return mass * t; }, T));
  const double eps = 0.1;
  checks.emplace_back("scaled", poisson_check([&](std::uint64_t s) { return sample_prm(nu, T, 1.0 / eps, s); },
                                              mass / eps, [&](double t) { return mass * t / eps; }, T));
  Eigen::MatrixXd v(4, 3);
  v << 2.0, 0.5, 1.0,  //
      0.0, 1.5, 3.0,   //
      1.0, 1.0, 0.0,   //
      0.7, 2.5, 1.2;
  const Control theta({0.0, 0.2, 0.5, 0.6, 1.0}, v);
  const double ce = 0.5;
  auto cum = [&](double t) {
    double s = 0.0;
    for (int m = 0; m < theta.cells(); ++m) {
      const double lo = theta.edges()[m], hi = std::min(theta.edges()[m + 1], t);
      if (hi <= lo) break;
      for (int j = 0; j < 3; ++j) s += (hi - lo) * nu.atoms()[j].weight * v(m, j) / ce;
    }
    return s;
  };
  checks.emplace_back("controlled",
                      poisson_check([&](std::uint64_t s) { return sample_controlled_prm(nu, T, ce, theta, s); },
                                    cum(T), cum, T));
  bool ok = true;
  std::string detail;
  for (const auto& [name, c] : checks) {
    ok = ok && std::abs(c.z_mean) < lt::kZ001 && std::abs(c.z_var) < lt::kZ001 && c.ks < c.ks_crit;
    detail += fmt::format("{}: z_mean={:.2f} z_var={:.2f} KS={:.4f}/{:.4f}; ", name, c.z_mean, c.z_var, c.ks, c.ks_crit);
  }
  report(12, "Poisson statistics", ok, detail);
}

}  // namespace

int main() {
  criterion_identities();
  criterion_marcus_oracle();
  criterion_lipschitz();
  criterion_decay();
  criterion_energy();
  criterion_determinism();
  criterion_skeleton_equivalence();
  criterion_condition1();
  criterion_condition2();
  criterion_entropy_and_rate();
  criterion_sk_bound();
  criterion_poisson();
  fmt::print("{} of 12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
