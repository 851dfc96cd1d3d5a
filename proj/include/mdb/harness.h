#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "mdb/core.h"
#include "mdb/environments.h"
#include "mdb/policies.h"

namespace mdb {

enum class EnvironmentKind { kSynthetic, kMatrix, kSurrogate, kLtr };
enum class RegretMode { kCondorcet, kNdcg };

struct EnvironmentSpec {
  EnvironmentKind kind = EnvironmentKind::kSynthetic;
  std::string name = "1good5poor";          // synthetic dataset name
  std::string path;                         // LETOR file, or JSON matrix file
  std::vector<std::vector<double>> matrix;  // inline matrix (kMatrix)
  std::size_t arms = 20;                    // surrogate size
  double margin = 0.2;                      // surrogate margin
  std::string click_model = "navigational";
  std::vector<FeatureId> rankers;           // empty: every feature in the dataset
  std::size_t ground_truth_samples = 10000;
};

struct PolicySpec {
  std::string label;
  PolicyConfig config;
};

/// ratio > 1 gives geometric checkpoints; interval > 0 overrides with every
/// interval-th round. The last round is always logged.
struct CheckpointSpec {
  double ratio = 1.3;
  std::uint64_t interval = 0;
};

struct DistortionSpec {
  std::vector<std::size_t> sizes{3, 10, 100};
  std::size_t rounds = 3000;
  std::size_t draws = 30;
  std::vector<std::string> click_models{"perfect", "navigational", "informational"};
};

struct SweepSpec {
  std::vector<double> alphas{0.5, 1.0, 1.5};
  std::vector<double> betas{1.25, 1.5, 2.0, 4.0};
};

struct ExperimentConfig {
  EnvironmentSpec environment;
  std::vector<PolicySpec> policies;
  std::uint64_t horizon = 10000;
  std::size_t replicates = 10;
  std::uint64_t seed = 1;
  std::string output;
  RegretMode regret = RegretMode::kCondorcet;
  CheckpointSpec checkpoints;
  /// Share of final rounds over which best-arm exploitation is measured.
  double tail_fraction = 0.1;
  /// Worker threads; 0 uses the hardware concurrency.
  std::size_t threads = 0;
  DistortionSpec distortion;
  SweepSpec sweep;

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& cfg);
void from_json(const nlohmann::json& j, ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

/// Default policy line-up: MDB, RUCB, RMED1, MergeRUCB, Random.
std::vector<PolicySpec> default_policies();

/// Environment plus the ground truth regret is charged against.
struct Problem {
  std::shared_ptr<const Environment> environment;
  RegretModel regret;
  std::string description;
};
Problem build_problem(const ExperimentConfig& cfg);

std::vector<std::uint64_t> checkpoint_rounds(std::uint64_t horizon, const CheckpointSpec& spec);

struct ReplicateResult {
  std::string policy;
  std::size_t replicate = 0;
  std::vector<RegretPoint> trace;
  double final_regret = 0.0;
  /// Share of tail rounds in which the set played was exactly {best arm}.
  double tail_best_rate = 0.0;
  bool valid = true;
  std::string error;
};

struct PolicySummary {
  std::string policy;
  std::size_t replicates = 0;
  double mean_final = 0.0;
  double std_final = 0.0;  // sample standard deviation
  double mean_tail_best_rate = 0.0;
};

struct RunResult {
  std::vector<ReplicateResult> runs;  // policy-major, then replicate
  std::vector<PolicySummary> summary;
  ArmId best_arm = 0;
  bool exact_regret = true;

  const PolicySummary& of(const std::string& policy) const;
};

/// Runs every (policy, replicate) cell for cfg.horizon rounds. Throws
/// std::invalid_argument on an invalid config before doing any work.
RunResult run_experiment(const ExperimentConfig& cfg);
/// Same, against an already built problem.
RunResult run_experiment(const ExperimentConfig& cfg, const Problem& problem);

/// Recomputes per-policy statistics from the runs.
std::vector<PolicySummary> summarize(const std::vector<ReplicateResult>& runs,
                                     const std::vector<PolicySpec>& order);

struct SweepRow {
  double alpha = 0.0;
  double beta = 0.0;
  PolicySummary summary;
};
struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t best = 0;
};
/// MDB over the cfg.sweep grid; best minimises mean final cumulative regret.
SweepResult sweep(const ExperimentConfig& cfg);

struct DistortionCell {
  std::string click_model;
  std::size_t subset_size = 0;
  double mean_fraction = 0.0;
  std::vector<double> fractions;  // one per draw
};
/// Average distortion over random subsets that contain a Condorcet winner.
/// Throws std::invalid_argument if a subset size exceeds the arm count.
std::vector<DistortionCell> distortion_report(const ExperimentConfig& cfg);

/// Columns: policy, replicate, checkpoint_t, instantaneous_regret, cumulative_regret.
void write_csv(std::ostream& out, const RunResult& result);
/// Throws std::runtime_error if the file cannot be written.
void emit_csv(const RunResult& result, const std::filesystem::path& path);
void write_summary_csv(std::ostream& out, const RunResult& result);
void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_distortion_csv(std::ostream& out, const std::vector<DistortionCell>& cells);

}  // namespace mdb
