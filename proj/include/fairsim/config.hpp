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

#ifndef FAIRSIM_CONFIG_HPP_
#define FAIRSIM_CONFIG_HPP_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairsim/datagen.hpp"
#include "fairsim/error.hpp"
#include "fairsim/usermodel.hpp"

namespace fairsim {

struct ExperimentConfig {
  GenConfig gen = DefaultConfig();
  std::vector<double> user_weights = DefaultUserWeights();
  std::vector<double> p_bias_grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<double> eta_grid = {1e-4, 1e-3, 0.01, 0.05, 0.1};
  std::vector<double> lambda_grid = {0.0, 0.1, 1.0, 10.0, 100.0};
  double sweep_eta = 0.01;  // fixed learning rate for the lambda sweep
  double alpha_a = 1e-3;
  std::size_t warm_sample_size = 1000;
  std::size_t warm_rounds = 1000;
  double warm_eta = 0.5;
  std::size_t online_rounds = 1000;
  std::size_t snapshot_interval = 25;
  std::size_t evolution_k = 25;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::vector<std::size_t> k_list = {25, 100, 500, 1000};
};

inline void Validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kInvalidConfig, what); };
  Validate(cfg.gen);
  if (cfg.user_weights.size() != static_cast<std::size_t>(cfg.gen.num_features()) + 1) {
    fail("user_weights must have m + 1 entries");
  }
  if (cfg.p_bias_grid.empty() || cfg.eta_grid.empty() || cfg.lambda_grid.empty() ||
      cfg.seeds.empty() || cfg.k_list.empty()) {
    fail("grids, seeds and k_list must be non-empty");
  }
  for (double p : cfg.p_bias_grid) {
    if (!(p >= 0.0 && p <= 1.0)) fail("p_bias values must lie in [0,1]");
  }
  for (double eta : cfg.eta_grid) {
    if (!(eta >= 0.0 && std::isfinite(eta))) fail("eta values must be finite and non-negative");
  }
  if (!(cfg.sweep_eta >= 0.0 && std::isfinite(cfg.sweep_eta))) fail("sweep_eta must be >= 0");
  if (!(cfg.warm_eta >= 0.0 && std::isfinite(cfg.warm_eta))) fail("warm_eta must be >= 0");
  for (double lambda : cfg.lambda_grid) {
    if (!(lambda >= 0.0 && std::isfinite(lambda))) fail("lambda values must be finite and non-negative");
  }
  if (!(cfg.alpha_a >= 0.0)) fail("alpha_a must be non-negative");
  if (cfg.warm_sample_size < 1 || cfg.warm_sample_size > cfg.gen.n) {
    fail("warm_sample_size must lie in [1, gen.n]");
  }
  if (cfg.online_rounds < 1 || cfg.online_rounds > cfg.gen.n) fail("online_rounds must lie in [1, gen.n]");
  for (std::size_t k : cfg.k_list) {
    if (k < 1 || k > cfg.gen.n) fail("k_list values must lie in [1, gen.n]");
  }
  if (std::set<std::uint64_t>(cfg.seeds.begin(), cfg.seeds.end()).size() != cfg.seeds.size()) {
    fail("seeds must be distinct");
  }
}

namespace internal {

inline nlohmann::json NormalToJson(const NormalDist& d) {
  return nlohmann::json{{"type", "normal"}, {"mean", d.mean}, {"std", d.stddev}};
}

inline NormalDist NormalFromJson(const nlohmann::json& j) {
  const std::string type = j.value("type", "normal");
  Require(type == "normal", ErrorKind::kInvalidConfig, "proxy distributions must be normal");
  return NormalDist{j.at("mean").get<double>(), j.at("std").get<double>()};
}

inline Distribution DistributionFromJson(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "uniform") return UniformDist{j.value("lo", 0.0), j.value("hi", 1.0)};
  if (type == "normal") return NormalFromJson(j);
  if (type == "categorical") {
    throw Error(ErrorKind::kInvalidConfig, "categorical attributes are not supported");
  }
  throw Error(ErrorKind::kInvalidConfig, "unknown distribution type '" + type + "'");
}

inline void RejectUnknownKeys(const nlohmann::json& j, const std::set<std::string>& known,
                              const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw Error(ErrorKind::kInvalidConfig, "unknown field '" + key + "' in " + where);
    }
  }
}

}  // namespace internal

inline nlohmann::json GenConfigToJson(const GenConfig& gen) {
  nlohmann::json harmless = nlohmann::json::array();
  for (const auto& dist : gen.harmless_dists) {
    if (const auto* u = std::get_if<UniformDist>(&dist)) {
      harmless.push_back({{"type", "uniform"}, {"lo", u->lo}, {"hi", u->hi}});
    } else {
      harmless.push_back(internal::NormalToJson(std::get<NormalDist>(dist)));
    }
  }
  nlohmann::json proxies = nlohmann::json::array();
  for (const auto& proxy : gen.proxy_dists) {
    proxies.push_back({{"a0", internal::NormalToJson(proxy.when_group0)},
                       {"a1", internal::NormalToJson(proxy.when_group1)}});
  }
  return nlohmann::json{{"p_group", gen.p_group}, {"n", gen.n},
                        {"m1", gen.m1},           {"m2", gen.m2},
                        {"harmless_dists", harmless}, {"proxy_dists", proxies}};
}

// Missing fields keep `base` values; m1/m2 follow the distribution lists
// unless given explicitly.
inline GenConfig GenConfigFromJson(const nlohmann::json& j, GenConfig base = DefaultConfig()) {
  internal::RejectUnknownKeys(j, {"p_group", "n", "m1", "m2", "harmless_dists", "proxy_dists", "seed"},
                              "gen");
  if (j.contains("p_group")) base.p_group = j["p_group"].get<double>();
  if (j.contains("n")) base.n = j["n"].get<std::size_t>();
  if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("harmless_dists")) {
    base.harmless_dists.clear();
    for (const auto& d : j["harmless_dists"]) base.harmless_dists.push_back(internal::DistributionFromJson(d));
    base.m1 = static_cast<int>(base.harmless_dists.size());
  }
  if (j.contains("proxy_dists")) {
    base.proxy_dists.clear();
    for (const auto& p : j["proxy_dists"]) {
      base.proxy_dists.push_back(
          ProxySpec{internal::NormalFromJson(p.at("a0")), internal::NormalFromJson(p.at("a1"))});
    }
    base.m2 = static_cast<int>(base.proxy_dists.size());
  }
  if (j.contains("m1")) base.m1 = j["m1"].get<int>();
  if (j.contains("m2")) base.m2 = j["m2"].get<int>();
  return base;
}

inline nlohmann::json ConfigToJson(const ExperimentConfig& cfg) {
  return nlohmann::json{{"gen", GenConfigToJson(cfg.gen)},
                        {"user_weights", cfg.user_weights},
                        {"p_bias_grid", cfg.p_bias_grid},
                        {"eta_grid", cfg.eta_grid},
                        {"lambda_grid", cfg.lambda_grid},
                        {"sweep_eta", cfg.sweep_eta},
                        {"alpha_a", cfg.alpha_a},
                        {"warm_sample_size", cfg.warm_sample_size},
                        {"warm_rounds", cfg.warm_rounds},
                        {"warm_eta", cfg.warm_eta},
                        {"online_rounds", cfg.online_rounds},
                        {"snapshot_interval", cfg.snapshot_interval},
                        {"evolution_k", cfg.evolution_k},
                        {"seeds", cfg.seeds},
                        {"k_list", cfg.k_list}};
}

inline ExperimentConfig ConfigFromJson(const nlohmann::json& j) {
  Require(j.is_object(), ErrorKind::kInvalidConfig, "config must be a JSON object");
  internal::RejectUnknownKeys(
      j,
      {"gen", "user_weights", "p_bias_grid", "eta_grid", "lambda_grid", "sweep_eta", "alpha_a",
       "warm_sample_size", "warm_rounds", "warm_eta", "online_rounds", "snapshot_interval",
       "evolution_k", "seeds", "k_list"},
      "config");
  ExperimentConfig cfg;
  try {
    if (j.contains("gen")) cfg.gen = GenConfigFromJson(j["gen"]);
    auto take = [&j](const char* key, auto& field) {
      if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    take("user_weights", cfg.user_weights);
    take("p_bias_grid", cfg.p_bias_grid);
    take("eta_grid", cfg.eta_grid);
    take("lambda_grid", cfg.lambda_grid);
    take("sweep_eta", cfg.sweep_eta);
    take("alpha_a", cfg.alpha_a);
    take("warm_sample_size", cfg.warm_sample_size);
    take("warm_rounds", cfg.warm_rounds);
    take("warm_eta", cfg.warm_eta);
    take("online_rounds", cfg.online_rounds);
    take("snapshot_interval", cfg.snapshot_interval);
    take("evolution_k", cfg.evolution_k);
    take("seeds", cfg.seeds);
    take("k_list", cfg.k_list);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidConfig, std::string("bad config value: ") + e.what());
  }
  Validate(cfg);
  return cfg;
}

}  // namespace fairsim

#endif  // FAIRSIM_CONFIG_HPP_
