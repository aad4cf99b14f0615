#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lrtc/mri_sim.hpp"
#include "lrtc/solver.hpp"

namespace lrtc {

enum class SamplingMethod { Var, Lev, VarPlusLev, VarTimesLev, Random, Coherence };

SamplingMethod parse_sampling_method(const std::string& name);
std::string to_string(SamplingMethod m);

/// Solver parameters without the observations (those change every round).
struct SolverConfig {
  SolverKind kind = SolverKind::Admm;
  std::vector<double> alpha;     // empty -> 1/n
  std::vector<double> lambda_i;  // empty -> 1
  double rho = 1.0;
  double lambda_s = 0.0;
  int max_sweeps = 200;
  double tol = 1e-6;
  bool warm_start = true;
  double rank_tol = 1e-6;

  ProblemSpec problem(ObservationSet omega) const;
};

struct ExperimentConfig {
  PhantomSpec phantom;  // seed is replaced per trial
  MaskSpec mask;        // shape follows the phantom, seed replaced per trial
  SolverConfig solver;
  std::vector<SamplingMethod> methods{SamplingMethod::Var};
  std::size_t batch_size = 10;
  std::size_t num_batches = 0;
  int trials = 1;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;  // empty -> no files written

  void validate() const;
};

/// Flat `key=value` text with dotted keys and `#` comments, e.g.
///   phantom.shape=16,16,8
///   experiment.method=Var,Random
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Seeds drawn from the per-trial stream (seed + trial index).
struct TrialSeeds {
  std::uint64_t phantom;
  std::uint64_t mask;
  std::uint64_t random;
};
TrialSeeds trial_seeds(std::uint64_t seed, int trial);

/// Runs every trial and method: solve on the initial mask, then num_batches
/// rounds of utility -> selection -> acquisition -> re-solve. One row per
/// round; a diverged solve records a row with NaN metrics and stops that
/// method's trial. When output_dir is set, rows go to output_dir/metrics.csv
/// one trial at a time.
std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg);

}  // namespace lrtc
