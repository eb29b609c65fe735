// llbsim: command-line driver for the LLB jump-noise solvers and suites.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <filesystem>
#include <iostream>

#include "llb/config.hpp"
#include "llb/io.hpp"
#include "llb/parallel.hpp"

namespace fs = std::filesystem;
using namespace llb;

namespace {

constexpr int kConfigError = 2;
constexpr int kBlowUp = 3;
constexpr int kVerifyFailed = 4;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> paths;
};

struct Run {
  RunConfig cfg;
  fs::path out;
  RunManifest manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Run(const Options& o, const std::string& command) : cfg(load_config(o.config)), out(o.out) {
    fs::create_directories(out);
    manifest.command = command;
    manifest.config_hash = fnv1a(cfg.source);
    manifest.master_seed = o.seed.value_or(cfg.experiment.master_seed);
  }

  fs::path file(const std::string& name) {
    manifest.files.push_back(name);
    const auto p = out / name;
    fs::create_directories(p.parent_path());
    return p;
  }

  void finish() {
    manifest.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(out, manifest);
  }
};

Field target_center(const RunConfig& cfg) {
  const auto& c = cfg.experiment.target.center;
  if (c == "zero") return Field(cfg.grid);
  if (c == "m0") return cfg.initial_field();
  SolverConfig s = cfg.solver;
  return integrate(s, cfg.initial_field(), {}, {}, {}, nullptr).terminal();
}

void write_path_outputs(Run& run, const std::string& prefix, const Trajectory& traj) {
  write_trajectory_csv(run.file(prefix + "trajectory.csv"), traj);
  write_jump_log_csv(run.file(prefix + "jumps.csv"), traj);
  write_field_csv(run.file(prefix + "terminal_field.csv"), traj.terminal());
}

int cmd_simulate(const Options& o) {
  Run run(o, "simulate");
  auto cfg = run.cfg.solver;
  if (o.seed) cfg.seed = *o.seed;
  run.manifest.master_seed = cfg.seed;
  const auto params = run.cfg.marcus();
  const auto path = sample_prm(run.cfg.nu, cfg.horizon, 1.0 / cfg.eps, cfg.seed);
  const auto traj = solve_llb_jump(cfg, run.cfg.initial_field(), run.cfg.nu, path, params);
  write_path_outputs(run, "", traj);
  write_path_csv(run.file("path.csv"), path);
  const auto energy = energy_report(traj, cfg.coefficients);
  write_energy_csv(run.file("energy.csv"), energy);
  run.manifest.extra = {{"path_seed", cfg.seed},
                        {"jumps", path.events.size()},
                        {"energy_balance_residual", energy.balance_residual}};
  run.finish();
  return 0;
}

int cmd_skeleton(const Options& o) {
  Run run(o, "skeleton");
  const auto traj = solve_skeleton(run.cfg.solver, run.cfg.initial_field(), run.cfg.nu,
                                   run.cfg.control, run.cfg.marcus());
  write_trajectory_csv(run.file("trajectory.csv"), traj);
  write_field_csv(run.file("terminal_field.csv"), traj.terminal());
  write_control_csv(run.file("control.csv"), run.cfg.control, run.cfg.nu);
  write_energy_csv(run.file("energy.csv"), energy_report(traj, run.cfg.solver.coefficients));
  run.manifest.extra = {{"entropy_cost", entropy_cost(run.cfg.control, run.cfg.nu, run.cfg.solver.horizon)}};
  run.finish();
  return 0;
}

int cmd_control(const Options& o) {
  Run run(o, "control");
  const std::uint64_t seed = o.seed.value_or(run.cfg.solver.seed);
  run.manifest.master_seed = seed;
  const auto traj = solve_stochastic_control(run.cfg.solver, run.cfg.initial_field(), run.cfg.nu,
                                             run.cfg.control, run.cfg.marcus(), seed);
  write_path_outputs(run, "", traj);
  write_control_csv(run.file("control.csv"), run.cfg.control, run.cfg.nu);
  run.manifest.extra = {{"path_seed", seed}, {"eps", run.cfg.solver.eps}};
  run.finish();
  return 0;
}

int cmd_rate(const Options& o) {
  Run run(o, "rate");
  const auto& t = run.cfg.experiment.target;
  const Field center = target_center(run.cfg);
  const auto target = t.kind == "near" ? TerminalTarget::near(center, t.radius)
                                       : TerminalTarget::outside_ball(center, t.radius);
  const auto result = rate_function(target, run.cfg.solver, run.cfg.initial_field(), run.cfg.nu,
                                    run.cfg.marcus(), run.cfg.experiment.rate);
  std::vector<nlohmann::json> records;
  records.push_back({{"record", "summary"},
                     {"target", target.description},
                     {"cost_upper_bound", result.cost},
                     {"terminal_gap", result.terminal_gap},
                     {"objective", result.objective},
                     {"iterations", result.iterations},
                     {"converged", result.converged}});
  for (const auto& e : result.trace)
    records.push_back({{"record", "trace"},
                       {"outer", e.outer},
                       {"sweep", e.sweep},
                       {"penalty", e.penalty},
                       {"objective", e.objective},
                       {"cost", e.cost},
                       {"gap", e.gap}});
  write_jsonl(run.file("rate.jsonl"), records);
  write_control_csv(run.file("control.csv"), result.control, run.cfg.nu);
  run.manifest.extra = {{"cost_upper_bound", result.cost}};
  run.finish();
  std::cout << fmt::format("rate upper bound {:.17g} (gap {:.3g})\n", result.cost, result.terminal_gap);
  return 0;
}

int cmd_ensemble(const Options& o) {
  Run run(o, "ensemble");
  const int n = o.paths.value_or(run.cfg.experiment.n_paths);
  const std::uint64_t master = run.manifest.master_seed;
  const auto params = run.cfg.marcus();
  const Field m0 = run.cfg.initial_field();
  std::vector<Trajectory> trajs(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  parallel_for(trajs.size(), [&](std::size_t i) {
    auto cfg = run.cfg.solver;
    cfg.seed = derive_seed(master, i);
    seeds[i] = cfg.seed;
    trajs[i] = solve_llb_jump(cfg, m0, run.cfg.nu, params);
  });
  std::vector<nlohmann::json> summary;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    write_path_outputs(run, fmt::format("path_{:04d}/", i), trajs[i]);
    const auto nr = norms(trajs[i].terminal());
    summary.push_back({{"path", i},
                       {"seed", seeds[i]},
                       {"jumps", trajs[i].jumps.size()},
                       {"terminal_l2", nr.l2},
                       {"terminal_h1", nr.h1}});
  }
  write_jsonl(run.file("ensemble.jsonl"), summary);
  run.manifest.extra = {{"n_paths", n}, {"seed_rule", "derive_seed(master_seed, path_index)"}};
  run.finish();
  return 0;
}

ExperimentReport energy_checks(const RunConfig& cfg) {
  ExperimentReport r;
  r.suite = "energy";
  r.scenario = "no-noise balance and jump growth";
  const Field m0 = cfg.initial_field();
  std::vector<double> residuals;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    auto s = cfg.solver;
    s.dt = dt;
    const auto traj = integrate(s, m0, {}, {}, {}, nullptr);
    residuals.push_back(std::abs(energy_report(traj, s.coefficients).balance_residual));
  }
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    Metric m;
    m.name = "residual_halving_ratio";
    m.params = {{"dt_coarse", 4e-3 / double(1 << (i - 1))}, {"residual_coarse", residuals[i - 1]},
                {"residual_fine", residuals[i]}};
    m.value = residuals[i] > 0.0 ? residuals[i - 1] / residuals[i] : 2.0;
    m.tolerance = 0.4;
    m.pass = std::abs(m.value - 2.0) <= 0.4 || residuals[i - 1] < 1e-13;
    r.metrics.push_back(m);
  }
  if (!cfg.nu.empty()) {
    const auto params = cfg.marcus();
    const MarcusBounds bounds(params);
    const auto traj = solve_llb_jump(cfg.solver, m0, cfg.nu, params);
    double worst = 0.0;
    for (const auto& j : traj.jumps)
      worst = std::max(worst, j.post_l2 * j.post_l2 / bounds.phi_growth_sq(traj.eps * j.mark, j.pre_l2));
    Metric m;
    m.name = "jump_growth_ratio";
    m.params = {{"jumps", traj.jumps.size()}};
    m.value = worst;
    m.tolerance = 1.0 + 1e-9;
    m.pass = worst <= m.tolerance;
    m.seed = cfg.solver.seed;
    r.metrics.push_back(m);
  }
  return r;
}

int cmd_verify(const Options& o) {
  Run run(o, "verify");
  const std::uint64_t seed = run.manifest.master_seed;
  const auto& x = run.cfg.experiment;
  std::vector<ExperimentReport> reports;
  reports.push_back(identity_suite(run.cfg.grid, run.cfg.h, x.identity_samples, seed));
  const auto params = run.cfg.marcus();
  for (auto op : {MarcusOperator::Phi, MarcusOperator::G, MarcusOperator::H, MarcusOperator::b})
    if (op != MarcusOperator::b || !run.cfg.nu.empty())
      reports.push_back(lipschitz_probe(op, run.cfg.grid, params, run.cfg.nu, x.lipschitz_samples, seed));
  reports.push_back(energy_checks(run.cfg));
  write_report_jsonl(run.file("verify.jsonl"), reports);
  bool ok = true;
  for (const auto& r : reports) {
    for (const auto& m : r.metrics) {
      std::cout << fmt::format("{} {}/{} value={:.6g}\n", m.pass ? "PASS" : "FAIL", r.suite, m.name, m.value);
      ok = ok && m.pass;
    }
  }
  run.manifest.extra = {{"passed", ok}};
  run.finish();
  return ok ? 0 : kVerifyFailed;
}

int cmd_ldp(const Options& o) {
  Run run(o, "ldp");
  const auto& x = run.cfg.experiment;
  const Field m0 = run.cfg.initial_field();
  const auto params = run.cfg.marcus();
  const Field center = integrate(run.cfg.solver, m0, {}, {}, {}, nullptr).terminal();
  std::vector<TerminalEvent> events;
  for (double r : x.ldp_radii)
    events.push_back({fmt::format("outside_ball(r={})", r),
                      [center, r](const Field& m) { return l2_norm(m - center) >= r; }});
  LdpOptions opts;
  opts.n_paths = o.paths.value_or(x.n_paths);
  opts.seed = run.manifest.master_seed;
  opts.margin = x.ldp_margin;
  if (!x.ldp_radii.empty() && !run.cfg.nu.empty()) {
    const auto rate = rate_function(TerminalTarget::outside_ball(center, x.ldp_radii.front()), run.cfg.solver,
                                    m0, run.cfg.nu, params, x.rate);
    opts.rate_estimate = rate.cost;
  }
  const auto report = ldp_slope_experiment(x.eps_list, events, run.cfg.solver, m0, run.cfg.nu, params, opts);
  write_report_jsonl(run.file("ldp.jsonl"), {report});
  run.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic LLB with Marcus jump noise"};
  app.require_subcommand(1);
  Options opts;
  std::uint64_t seed = 0;
  int paths = 0;
  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const Options&);
  };
  const Command commands[] = {
      {"simulate", "integrate one path of the jump-driven equation", cmd_simulate},
      {"skeleton", "solve the skeleton equation for the configured control", cmd_skeleton},
      {"control", "integrate one path of the stochastic control equation", cmd_control},
      {"rate", "estimate the rate function upper bound for the configured target", cmd_rate},
      {"ensemble", "run paths with seeds derived from the master seed", cmd_ensemble},
      {"verify", "run identity, Lipschitz and energy suites", cmd_verify},
      {"ldp", "Monte Carlo estimates of eps log p for terminal events", cmd_ldp},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  std::vector<CLI::Option*> seed_opts, path_opts;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opts.config, "YAML config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "output directory")->required();
    seed_opts.push_back(sub->add_option("--seed", seed, "seed override"));
    path_opts.push_back(sub->add_option("--paths", paths, "number of paths")->check(CLI::PositiveNumber));
    subs.emplace_back(sub, &c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i].first->parsed()) continue;
    if (seed_opts[i]->count()) opts.seed = seed;
    if (path_opts[i]->count()) opts.paths = paths;
    try {
      return subs[i].second->fn(opts);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfigError;
    } catch (const BlowUpError& e) {
      std::cerr << "blow-up: " << e.what() << "\n";
      return kBlowUp;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
