#include "pdef/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pdef/model_io.hpp"
#include "pdef/policies.hpp"

namespace pdef {

std::uint64_t trial_seed(std::uint64_t base, int n, int trial) {
  return split_seed(base, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)});
}

GameConfig trial_config(const ExperimentSpec& spec, int n, int trial) {
  const auto seed = trial_seed(spec.base_seed, n, trial);
  GameConfig cfg = spec.radius ? GameConfig::for_team_with_radius(n, *spec.radius, seed) : GameConfig::for_team(n, seed);
  if (spec.arena_radius) cfg.arena_radius = *spec.arena_radius;
  if (spec.intruder_feats) cfg.intruder_feats = *spec.intruder_feats;
  if (spec.sensing_range) cfg.sensing_range = *spec.sensing_range;
  cfg.validate();
  return cfg;
}

ModelSet load_models(const ExperimentSpec& spec) {
  ModelSet models;
  for (const auto& a : spec.algorithms) {
    const std::string* path = a == "gnn" ? &spec.gnn_model : a == "mlp" ? &spec.mlp_model : nullptr;
    if (!path) continue;
    if (path->empty()) throw ExperimentError("algorithm '" + a + "' needs a model checkpoint");
    models[a] = std::make_shared<const GnnModel>(load_model(*path));
  }
  return models;
}

std::unique_ptr<AssignmentPolicy> make_policy(const std::string& algorithm, const ModelSet& models,
                                              std::uint64_t seed) {
  if (algorithm == "expert") return std::make_unique<ExpertPolicy>();
  if (algorithm == "greedy") return std::make_unique<GreedyPolicy>();
  if (algorithm == "random") return std::make_unique<RandomPolicy>(split_seed(seed, 1));
  if (algorithm == "gnn" || algorithm == "mlp") {
    auto it = models.find(algorithm);
    if (it == models.end()) throw ExperimentError("no checkpoint loaded for '" + algorithm + "'");
    return std::make_unique<LearnedPolicy>(it->second, algorithm);
  }
  throw ExperimentError("unknown algorithm '" + algorithm + "'");
}

namespace {

template <class Job>
void parallel_for(std::size_t count, int jobs, Job&& job) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(count, jobs > 0 ? jobs : hw);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<MetricsRow> run_experiment(const ExperimentSpec& spec, const ModelSet& models) {
  if (spec.trials < 1) throw ExperimentError("trials must be positive");
  for (const auto& a : spec.algorithms) {
    if (a != "expert") continue;
    for (int n : spec.team_sizes) {
      if (n > spec.expert_max_team && !spec.allow_large_expert) {
        throw ExperimentError("expert requested at N=" + std::to_string(n) + " (limit " +
                              std::to_string(spec.expert_max_team) + "); pass the override to allow it");
      }
    }
  }
  struct Job {
    std::string algorithm;
    int n;
    int trial;
  };
  std::vector<Job> jobs;
  for (const auto& a : spec.algorithms)
    for (int n : spec.team_sizes)
      for (int t = 0; t < spec.trials; ++t) jobs.push_back({a, n, t});
  std::vector<MetricsRow> rows(jobs.size());
  parallel_for(jobs.size(), spec.jobs, [&](std::size_t i) {
    const auto& j = jobs[i];
    const auto cfg = trial_config(spec, j.n, j.trial);
    auto policy = make_policy(j.algorithm, models, cfg.rng_seed);
    const auto r = run_game(cfg, *policy);
    rows[i] = {j.algorithm, j.n, j.trial, cfg.rng_seed, r.captures, r.intrusions, r.terminal_time,
               static_cast<double>(r.captures) / j.n};
  });
  return rows;
}

std::vector<MetricsRow> run_experiment(const ExperimentSpec& spec) { return run_experiment(spec, load_models(spec)); }

Accuracy absolute_accuracy(const std::vector<MetricsRow>& rows) {
  Accuracy a;
  a.trials = static_cast<int>(rows.size());
  if (rows.empty()) return a;
  for (const auto& r : rows) a.mean += static_cast<double>(r.captures) / r.n;
  a.mean /= a.trials;
  if (a.trials > 1) {
    double ss = 0.0;
    for (const auto& r : rows) ss += std::pow(static_cast<double>(r.captures) / r.n - a.mean, 2);
    a.stddev = std::sqrt(ss / (a.trials - 1));
  }
  return a;
}

Ratio comparative_accuracy(const std::vector<MetricsRow>& numer, const std::vector<MetricsRow>& denom) {
  auto mean = [](const std::vector<MetricsRow>& rows) {
    double s = 0.0;
    for (const auto& r : rows) s += r.captures;
    return rows.empty() ? 0.0 : s / rows.size();
  };
  const double d = mean(denom);
  if (d == 0.0) return {std::numeric_limits<double>::quiet_NaN(), true};
  return {mean(numer) / d, false};
}

std::vector<MetricsRow> select(const std::vector<MetricsRow>& rows, const std::string& algorithm, int n) {
  std::vector<MetricsRow> out;
  for (const auto& r : rows)
    if (r.algorithm == algorithm && r.n == n) out.push_back(r);
  return out;
}

std::vector<SweepRow> run_sweep(const std::vector<SweepPoint>& points) {
  std::vector<SweepRow> out;
  for (const auto& p : points) {
    for (auto& r : run_experiment(p.spec)) out.push_back({p.parameter, p.value, std::move(r)});
  }
  return out;
}

std::vector<SweepPoint> radius_sweep(const ExperimentSpec& base, const std::vector<double>& radii, int n) {
  std::vector<SweepPoint> pts;
  for (double r : radii) {
    SweepPoint p{"radius", r, base};
    p.spec.team_sizes = {n};
    p.spec.radius = r;
    p.spec.arena_radius = GameConfig::for_team(n).arena_radius;
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<SweepPoint> sensing_sweep(const ExperimentSpec& base,
                                      const std::map<int, std::pair<std::string, std::string>>& models) {
  std::vector<SweepPoint> pts;
  for (const auto& [feats, paths] : models) {
    SweepPoint p{"intruder_feats", static_cast<double>(feats), base};
    p.spec.intruder_feats = feats;
    p.spec.gnn_model = paths.first;
    p.spec.mlp_model = paths.second;
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<SweepPoint> demos_sweep(const ExperimentSpec& base,
                                    const std::map<long, std::pair<std::string, std::string>>& models) {
  std::vector<SweepPoint> pts;
  for (const auto& [count, paths] : models) {
    SweepPoint p{"demos", static_cast<double>(count), base};
    p.spec.gnn_model = paths.first;
    p.spec.mlp_model = paths.second;
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace pdef
