// CSV / JSONL writers and the run manifest. Numbers are written with 17
// significant digits so that re-runs compare byte for byte.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "llb/config.hpp"

namespace llb {

/// t,l2,h1,h2,l4,linf,kind
void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj);
/// t,l,pre_l2,post_l2
void write_jump_log_csv(const std::filesystem::path& file, const Trajectory& traj);
/// mode,k1,k2,c1,c2,c3
void write_field_csv(const std::filesystem::path& file, const Field& f);
/// t,l
void write_path_csv(const std::filesystem::path& file, const JumpPath& path);
/// cell_start,cell_end,atom_l,theta
void write_control_csv(const std::filesystem::path& file, const Control& theta, const LevyMeasure& nu);
/// t,l2,h1,l4 and the cumulative integrals
void write_energy_csv(const std::filesystem::path& file, const EnergyReport& e);
void write_report_jsonl(const std::filesystem::path& file, const std::vector<ExperimentReport>& reports);
void write_jsonl(const std::filesystem::path& file, const std::vector<nlohmann::json>& records);

struct RunManifest {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::string> files;
  double wall_clock_s = 0.0;
  nlohmann::json extra = nlohmann::json::object();
};

void write_manifest(const std::filesystem::path& dir, const RunManifest& m);

std::string format_double(double v);

}  // namespace llb
