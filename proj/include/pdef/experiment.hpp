#pragma once

// Paired multi-algorithm evaluation and parameter sweeps.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdef/game.hpp"
#include "pdef/gnn.hpp"

namespace pdef {

struct ExperimentSpec {
  std::vector<int> team_sizes{2, 4, 6, 8, 10};
  int trials = 10;
  std::vector<std::string> algorithms{"expert", "gnn", "greedy", "random", "mlp"};
  std::string gnn_model;
  std::string mlp_model;
  std::uint64_t base_seed = 1;
  std::optional<double> radius;
  std::optional<double> arena_radius;
  std::optional<int> intruder_feats;
  std::optional<double> sensing_range;
  int expert_max_team = 10;
  bool allow_large_expert = false;
  int jobs = 0;  ///< worker threads; 0 = hardware concurrency

  static std::vector<int> small_sizes() { return {2, 4, 6, 8, 10}; }
  static std::vector<int> large_sizes() { return {20, 40, 60, 80, 100}; }
};

struct MetricsRow {
  std::string algorithm;
  int n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  int captures = 0;
  int intrusions = 0;
  double terminal_time = 0.0;
  double pct_caught = 0.0;
};

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seed of trial `trial` at team size `n`; shared by every algorithm.
std::uint64_t trial_seed(std::uint64_t base, int n, int trial);

/// Game configuration for one trial, with the spec's overrides applied.
GameConfig trial_config(const ExperimentSpec& spec, int n, int trial);

/// Loaded checkpoints keyed by algorithm name ("gnn", "mlp").
using ModelSet = std::map<std::string, std::shared_ptr<const GnnModel>>;

ModelSet load_models(const ExperimentSpec& spec);

std::unique_ptr<AssignmentPolicy> make_policy(const std::string& algorithm, const ModelSet& models,
                                              std::uint64_t seed);

/// Rows in (algorithm as listed, N ascending as listed, trial) order.
std::vector<MetricsRow> run_experiment(const ExperimentSpec& spec, const ModelSet& models);
std::vector<MetricsRow> run_experiment(const ExperimentSpec& spec);

struct Accuracy {
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation; 0 for one trial
  int trials = 0;
};

/// Captures / N over the given rows.
Accuracy absolute_accuracy(const std::vector<MetricsRow>& rows);

struct Ratio {
  double value = 0.0;
  bool division_domain = false;  ///< denominator mean was zero; value is NaN
};

/// Mean captures of `numer` over mean captures of `denom`.
Ratio comparative_accuracy(const std::vector<MetricsRow>& numer, const std::vector<MetricsRow>& denom);

std::vector<MetricsRow> select(const std::vector<MetricsRow>& rows, const std::string& algorithm, int n);

/// One point of a sweep: a label/value pair and the spec evaluated there.
struct SweepPoint {
  std::string parameter;
  double value = 0.0;
  ExperimentSpec spec;
};

struct SweepRow {
  std::string parameter;
  double value = 0.0;
  MetricsRow row;
};

std::vector<SweepRow> run_sweep(const std::vector<SweepPoint>& points);

/// Radius sweep at fixed N (default 40). The arena keeps its size for N, so
/// intruders start ever closer to a growing perimeter; radii must stay at or
/// below arena/1.2.
std::vector<SweepPoint> radius_sweep(const ExperimentSpec& base, const std::vector<double>& radii, int n = 40);

/// N_A^f sweep; `models` maps the feature count to (gnn path, mlp path).
std::vector<SweepPoint> sensing_sweep(const ExperimentSpec& base,
                                      const std::map<int, std::pair<std::string, std::string>>& models);

/// Demonstration-count sweep; `models` maps the sample count to (gnn, mlp).
std::vector<SweepPoint> demos_sweep(const ExperimentSpec& base,
                                    const std::map<long, std::pair<std::string, std::string>>& models);

}  // namespace pdef
