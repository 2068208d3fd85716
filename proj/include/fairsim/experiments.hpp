// Copyright 2026 The FairSim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRSIM_EXPERIMENTS_HPP_
#define FAIRSIM_EXPERIMENTS_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "fairsim/config.hpp"
#include "fairsim/datagen.hpp"
#include "fairsim/error.hpp"
#include "fairsim/fairreg.hpp"
#include "fairsim/learner.hpp"
#include "fairsim/metrics.hpp"
#include "fairsim/online.hpp"
#include "fairsim/random.hpp"
#include "fairsim/usermodel.hpp"

namespace fairsim {

enum class Experiment { kFinalEval, kEvolution, kRegSweep };

inline const char* ExperimentName(Experiment e) {
  switch (e) {
    case Experiment::kFinalEval: return "final_eval";
    case Experiment::kEvolution: return "evolution";
    case Experiment::kRegSweep: return "reg_sweep";
  }
  return "unknown";
}

// Stream tags for DeriveSeed; changing any of these changes every result.
enum class Stream : std::uint64_t {
  kFairPool = 1,
  kFairLabels = 2,
  kWarmSampling = 3,
  kOnlinePool = 4,
  kOnlineLabels = 5,
};

inline std::uint64_t StreamSeed(std::uint64_t seed, Stream stream) {
  return DeriveSeed(seed, static_cast<std::uint64_t>(stream));
}

struct EvolutionPoint {
  std::size_t round = 0;
  MetricsReport report;
};

struct RunResult {
  double p_bias = 0.0;
  double eta = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  LinearModel warm_model;
  LinearModel final_model;
  OnlineTrace trace;
  MetricsReport report_final;  // full online pool re-ranked by final_model
  MetricsReport report_warm;   // same pool and labels, ranked by warm_model
  std::vector<EvolutionPoint> reports_evolution;
  std::optional<std::string> error;
};

// Everything one seed shares across its cells: pools, warm model,
// regularizer and baseline.
struct SeedContext {
  std::uint64_t seed = 0;
  LabeledPool fair_pool;
  LinearModel warm_model;
  std::vector<DataPoint> online_points;
  Baseline baseline;
  FairRegularizer regularizer;  // lambda left at 0
  std::map<double, LabeledPool> online_pools;  // keyed by p_bias
  std::optional<std::string> error;
};

inline SeedContext BuildSeedContext(const ExperimentConfig& cfg, std::uint64_t seed,
                                    bool with_regularizer) {
  SeedContext ctx;
  ctx.seed = seed;
  GenConfig fair_gen = cfg.gen;
  fair_gen.seed = StreamSeed(seed, Stream::kFairPool);
  ctx.fair_pool = LabelPool(GeneratePool(fair_gen),
                            UserConfig{0.0, cfg.user_weights, StreamSeed(seed, Stream::kFairLabels)});
  ctx.warm_model = WarmStart(ctx.fair_pool, WarmStartParams{cfg.warm_sample_size, cfg.warm_rounds,
                                                            cfg.warm_eta,
                                                            StreamSeed(seed, Stream::kWarmSampling)});
  GenConfig online_gen = cfg.gen;
  online_gen.seed = StreamSeed(seed, Stream::kOnlinePool);
  ctx.online_points = GeneratePool(online_gen);
  ctx.baseline = ComputeBaseline(ctx.online_points, UserConfig{0.0, cfg.user_weights, 0});
  if (with_regularizer) ctx.regularizer = FitAuxiliary(ctx.fair_pool.points, cfg.alpha_a);
  for (double p_bias : cfg.p_bias_grid) {
    ctx.online_pools.emplace(
        p_bias, LabelPool(ctx.online_points,
                          UserConfig{p_bias, cfg.user_weights, StreamSeed(seed, Stream::kOnlineLabels)}));
  }
  return ctx;
}

// Runs fn(0..count-1) on up to `jobs` threads. Each index owns its output
// slot, so results do not depend on scheduling.
inline void ParallelFor(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

namespace internal {

struct Cell {
  std::size_t seed_index;
  double p_bias;
  double eta;
  double lambda;
  bool regularized;
};

inline std::vector<SeedContext> BuildContexts(const ExperimentConfig& cfg, bool with_regularizer,
                                              std::size_t jobs) {
  std::vector<SeedContext> contexts(cfg.seeds.size());
  ParallelFor(cfg.seeds.size(), jobs, [&](std::size_t i) {
    try {
      contexts[i] = BuildSeedContext(cfg, cfg.seeds[i], with_regularizer);
    } catch (const std::exception& e) {
      contexts[i].seed = cfg.seeds[i];
      contexts[i].error = e.what();
    }
  });
  return contexts;
}

// Snapshot evaluation: the points shown so far, re-ranked by the snapshot
// model (equal scores keep shown order).
inline MetricsReport EvaluateShown(const LabeledPool& pool, std::span<const std::size_t> shown,
                                   const LinearModel& model, std::size_t k, const Baseline& baseline) {
  std::vector<double> scores(shown.size());
  for (std::size_t r = 0; r < shown.size(); ++r) scores[r] = Score(model, pool.points[shown[r]].features);
  std::vector<std::size_t> positions(shown.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  std::ranges::stable_sort(positions, [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<std::size_t> order(shown.size());
  for (std::size_t r = 0; r < shown.size(); ++r) order[r] = shown[positions[r]];
  const std::array<std::size_t, 1> ks{k};
  return Evaluate(Arrange(pool, order), ks, shown.size(), baseline);
}

inline RunResult RunCell(const ExperimentConfig& cfg, const SeedContext& ctx, const Cell& cell,
                         bool evolution) {
  RunResult result;
  result.p_bias = cell.p_bias;
  result.eta = cell.eta;
  result.lambda = cell.lambda;
  result.seed = ctx.seed;
  try {
    if (ctx.error) throw Error(ErrorKind::kUndefined, "seed setup failed: " + *ctx.error);
    const LabeledPool& pool = ctx.online_pools.at(cell.p_bias);
    result.warm_model = ctx.warm_model;
    const FairRegularizer reg = ctx.regularizer.WithLambda(cell.lambda);
    OnlineResult online = RunOnline(ctx.warm_model, pool,
                                    OnlineParams{cfg.online_rounds, cell.eta, cfg.snapshot_interval},
                                    cell.regularized ? &reg : nullptr);
    result.final_model = std::move(online.model);
    result.trace = std::move(online.trace);

    const std::size_t ndcs_k_max = std::min(cfg.online_rounds, pool.size());
    result.report_final = Evaluate(Arrange(pool, RankByModel(result.final_model, pool.points)),
                                   cfg.k_list, ndcs_k_max, ctx.baseline);
    result.report_warm = Evaluate(Arrange(pool, RankByModel(result.warm_model, pool.points)),
                                  cfg.k_list, ndcs_k_max, ctx.baseline);
    if (evolution) {
      for (const auto& snapshot : result.trace.snapshots) {
        const std::span<const std::size_t> shown(result.trace.shown_order.data(), snapshot.round);
        result.reports_evolution.push_back(EvolutionPoint{
            snapshot.round, EvaluateShown(pool, shown, snapshot.model, cfg.evolution_k, ctx.baseline)});
      }
    }
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

inline std::vector<RunResult> RunCells(const ExperimentConfig& cfg, const std::vector<Cell>& cells,
                                       const std::vector<SeedContext>& contexts, bool evolution,
                                       std::size_t jobs) {
  std::vector<RunResult> results(cells.size());
  ParallelFor(cells.size(), jobs, [&](std::size_t i) {
    results[i] = RunCell(cfg, contexts[cells[i].seed_index], cells[i], evolution);
  });
  return results;
}

}  // namespace internal

// Per (p_bias, eta, seed): warm start on a fair pool, personalize on the
// biased online pool, then re-rank the whole online pool with both models.
inline std::vector<RunResult> RunFinalEval(const ExperimentConfig& cfg, std::size_t jobs = 1) {
  Validate(cfg);
  const auto contexts = internal::BuildContexts(cfg, false, jobs);
  std::vector<internal::Cell> cells;
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    for (double p_bias : cfg.p_bias_grid) {
      for (double eta : cfg.eta_grid) cells.push_back({s, p_bias, eta, 0.0, false});
    }
  }
  return internal::RunCells(cfg, cells, contexts, false, jobs);
}

// Same cells as RunFinalEval plus per-snapshot metrics on the shown list.
inline std::vector<RunResult> RunEvolution(const ExperimentConfig& cfg, std::size_t jobs = 1) {
  Validate(cfg);
  Require(cfg.snapshot_interval >= 1 && cfg.online_rounds % cfg.snapshot_interval == 0,
          ErrorKind::kInvalidConfig, "snapshot_interval must divide online_rounds");
  Require(cfg.evolution_k >= 1 && cfg.evolution_k <= cfg.snapshot_interval, ErrorKind::kInvalidConfig,
          "evolution_k must lie in [1, snapshot_interval]");
  const auto contexts = internal::BuildContexts(cfg, false, jobs);
  std::vector<internal::Cell> cells;
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    for (double p_bias : cfg.p_bias_grid) {
      for (double eta : cfg.eta_grid) cells.push_back({s, p_bias, eta, 0.0, false});
    }
  }
  return internal::RunCells(cfg, cells, contexts, true, jobs);
}

// Per (p_bias, lambda, seed) at eta = sweep_eta, with the penalty direction
// fit on the seed's warm (fair) pool.
inline std::vector<RunResult> RunRegSweep(const ExperimentConfig& cfg, std::size_t jobs = 1) {
  Validate(cfg);
  const auto contexts = internal::BuildContexts(cfg, true, jobs);
  std::vector<internal::Cell> cells;
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    for (double p_bias : cfg.p_bias_grid) {
      for (double lambda : cfg.lambda_grid) cells.push_back({s, p_bias, cfg.sweep_eta, lambda, true});
    }
  }
  return internal::RunCells(cfg, cells, contexts, false, jobs);
}

inline std::vector<RunResult> RunExperiment(Experiment experiment, const ExperimentConfig& cfg,
                                            std::size_t jobs = 1) {
  switch (experiment) {
    case Experiment::kFinalEval: return RunFinalEval(cfg, jobs);
    case Experiment::kEvolution: return RunEvolution(cfg, jobs);
    case Experiment::kRegSweep: return RunRegSweep(cfg, jobs);
  }
  return {};
}

}  // namespace fairsim

#endif  // FAIRSIM_EXPERIMENTS_HPP_
