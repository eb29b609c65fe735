// Run configuration: a YAML document with sections grid, physics, noise,
// solver, control and experiment. Unknown keys are rejected.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "llb/diagnostics.hpp"

namespace llb {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TargetSpec {
  std::string kind = "near";        // near | outside_ball
  std::string center = "skeleton";  // skeleton | m0 | zero
  double radius = 0.05;
};

struct ExperimentConfig {
  std::uint64_t master_seed = 1;
  int n_paths = 8;
  std::vector<double> eps_list{0.1, 0.05, 0.025};
  double stop_factor = 10.0;
  std::optional<double> stop_level;
  int identity_samples = 200;
  int lipschitz_samples = 500;
  TargetSpec target;
  RateOptions rate;
  std::vector<double> ldp_radii{0.5};
  double ldp_margin = 0.5;
  std::vector<int> galerkin_levels{4, 8, 16};
};

struct RunConfig {
  Grid grid;
  FieldExpression h;
  FieldExpression m0;
  MarcusMode marcus_mode = MarcusMode::closed_form;
  double marcus_step = 1e-3;
  LevyMeasure nu;
  nlohmann::json noise_description;
  SolverConfig solver;
  Control control;
  ExperimentConfig experiment;
  std::string source;  // raw text, hashed into the manifest

  Field initial_field() const { return m0.to_field(grid); }
  MarcusParams marcus() const {
    return MarcusParams(h.evaluate(grid), marcus_mode, marcus_step, h.w1inf_bound());
  }
};

RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// FNV-1a 64-bit hash, used for the manifest config hash.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace llb
