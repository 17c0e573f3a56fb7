#ifndef VSCLAB_PIPELINE_HPP
#define VSCLAB_PIPELINE_HPP

#include "vsclab/distfun.hpp"
#include "vsclab/indexfun.hpp"
#include "vsclab/problems.hpp"
#include "vsclab/rates.hpp"
#include "vsclab/vsc.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vsclab {

struct DistfunConfig {
  double r_min = 1e-3;
  double r_max = 1e4;
  int num_points = 60;
  int multistart = 8;
};

struct IndexfunConfig {
  double t_min_factor = 1e-6;  // relative to ||y_dagger||
  double t_max_factor = 10.0;
  int num_points = 50;
  double decay_tol = -1.0;  // < 0: automatic
  double trivial_slope = 1.0;
};

struct VscConfig {
  int num_samples = 10000;
  std::vector<double> scales{0.1, 1.0, 10.0};
  double tolerance = 1e-6;
};

struct RatesConfig {
  double delta_min_factor = 1e-4;  // relative to ||y_dagger||
  double delta_max_factor = 1e-1;
  int num_deltas = 8;
  int replicates = 11;
  AlphaRule rule = AlphaRule::APrioriPhi;
};

struct SolveConfig {
  double alpha = 1e-2;
  double delta = 0.0;
};

struct RunConfig {
  ProblemInstance problem;
  double beta = 0.5;
  DistfunConfig distfun;
  IndexfunConfig indexfun;
  VscConfig vsc;
  RatesConfig rates;
  SolveConfig solve;
  SolverOptions solver;
  std::uint64_t seed = 1;
  std::string output_dir;
};

/// Strict parse: unknown keys and out-of-range values are fatal, with the
/// offending JSON path in the message.
RunConfig load_config(const std::filesystem::path& path);

// Individual stages. Each reads its upstream artifacts from `out` and writes
// its own; a missing upstream artifact raises with the stage that must run
// first.
void stage_problem(const RunConfig& cfg, const std::filesystem::path& out);
void stage_solve(const RunConfig& cfg, const std::filesystem::path& out);
void stage_distfun(const RunConfig& cfg, const std::filesystem::path& out);
void stage_indexfun(const RunConfig& cfg, const std::filesystem::path& out);
void stage_verify(const RunConfig& cfg, const std::filesystem::path& out);
void stage_rates(const RunConfig& cfg, const std::filesystem::path& out);

/// Full pipeline; returns the process exit code (0 ok, 2 when VSC violations
/// exceed tolerance). summary.json is written in both cases.
int run_pipeline(const RunConfig& cfg, const std::filesystem::path& out);

// Artifact IO used by the stages and by tests.
void write_distance_profile(const DistanceProfile& profile, const std::filesystem::path& out);
DistanceProfile read_distance_profile(const std::filesystem::path& out);
void write_index_function(const IndexFunction& phi, const std::filesystem::path& out);
IndexFunction read_index_function(const std::filesystem::path& out);

}  // namespace vsclab

#endif
