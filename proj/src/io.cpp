#include "llb/io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <stdexcept>

namespace llb {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

namespace {

std::ofstream open(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

const char* kind_name(SnapshotKind k) {
  switch (k) {
    case SnapshotKind::grid: return "grid";
    case SnapshotKind::pre_jump: return "pre_jump";
    case SnapshotKind::post_jump: return "post_jump";
  }
  return "?";
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj) {
  auto out = open(file);
  out << "t,l2,h1,h2,l4,linf,kind\n";
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const auto n = norms(traj.snapshots[i]);
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", traj.times[i], n.l2,
                       n.h1, n.h2, n.l4, n.linf, kind_name(traj.kinds[i]));
  }
}

void write_jump_log_csv(const std::filesystem::path& file, const Trajectory& traj) {
  auto out = open(file);
  out << "t,l,pre_l2,post_l2\n";
  for (const auto& j : traj.jumps)
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", j.time, j.mark, j.pre_l2, j.post_l2);
}

void write_field_csv(const std::filesystem::path& file, const Field& f) {
  auto out = open(file);
  out << "mode,k1,k2,c1,c2,c3\n";
  const auto& modes = f.grid()->modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto r = f.coeffs().row(static_cast<Eigen::Index>(i));
    out << fmt::format("{},{},{},{:.17g},{:.17g},{:.17g}\n", i, modes[i].k1, modes[i].k2, r(0), r(1), r(2));
  }
}

void write_path_csv(const std::filesystem::path& file, const JumpPath& path) {
  auto out = open(file);
  out << "t,l\n";
  for (const auto& e : path.events) out << fmt::format("{:.17g},{:.17g}\n", e.time, e.mark);
}

void write_control_csv(const std::filesystem::path& file, const Control& theta, const LevyMeasure& nu) {
  auto out = open(file);
  out << "cell_start,cell_end,atom_l,theta\n";
  for (int m = 0; m < theta.cells(); ++m)
    for (int j = 0; j < theta.atoms(); ++j)
      out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", theta.edges()[m], theta.edges()[m + 1],
                         nu.atoms()[j].mark, theta.values()(m, j));
}

void write_energy_csv(const std::filesystem::path& file, const EnergyReport& e) {
  auto out = open(file);
  out << "t,l2,h1,l4,int_grad_sq,int_l4_pow4,int_l2_sq,int_lap_sq\n";
  for (std::size_t i = 0; i < e.times.size(); ++i)
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", e.times[i],
                       e.norms[i].l2, e.norms[i].h1, e.norms[i].l4, e.grad_sq[i], e.l4_pow4[i],
                       e.l2_sq[i], e.lap_sq[i]);
}

void write_jsonl(const std::filesystem::path& file, const std::vector<nlohmann::json>& records) {
  auto out = open(file);
  for (const auto& r : records) out << r.dump() << "\n";
}

void write_report_jsonl(const std::filesystem::path& file, const std::vector<ExperimentReport>& reports) {
  std::vector<nlohmann::json> all;
  for (const auto& r : reports)
    for (auto& j : r.records()) all.push_back(std::move(j));
  write_jsonl(file, all);
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
  nlohmann::json j = {{"command", m.command},
                      {"config_hash", fmt::format("{:016x}", m.config_hash)},
                      {"master_seed", m.master_seed},
                      {"version", LLB_VERSION},
                      {"modules",
                       {{"spectral-core", LLB_VERSION},
                        {"marcus-flow", LLB_VERSION},
                        {"jump-noise", LLB_VERSION},
                        {"sde-solver", LLB_VERSION},
                        {"skeleton", LLB_VERSION},
                        {"diagnostics", LLB_VERSION},
                        {"cli-app", LLB_VERSION}}},
                      {"files", m.files},
                      {"wall_clock_s", m.wall_clock_s},
                      {"extra", m.extra}};
  auto out = open(dir / "manifest.json");
  out << j.dump(2) << "\n";
}

}  // namespace llb
