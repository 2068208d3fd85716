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

#ifndef FAIRSIM_LEARNER_HPP_
#define FAIRSIM_LEARNER_HPP_

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairsim/error.hpp"
#include "fairsim/random.hpp"
#include "fairsim/usermodel.hpp"

namespace fairsim {

// Intercept-augmented linear scorer: weights[0] multiplies a constant 1.
struct LinearModel {
  std::vector<double> weights;

  static LinearModel Zero(std::size_t num_features) {
    return LinearModel{std::vector<double>(num_features + 1, 0.0)};
  }

  std::size_t num_features() const { return weights.empty() ? 0 : weights.size() - 1; }

  bool IsFinite() const {
    for (double w : weights) {
      if (!std::isfinite(w)) return false;
    }
    return true;
  }

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

inline void CheckDims(const LinearModel& model, std::span<const double> x) {
  Require(model.weights.size() == x.size() + 1, ErrorKind::kDimensionMismatch,
          "model has " + std::to_string(model.weights.size()) + " weights for " +
              std::to_string(x.size()) + " features");
}

inline void CheckEta(double eta) {
  Require(eta >= 0.0 && std::isfinite(eta), ErrorKind::kOutOfRange,
          "learning rate must be finite and non-negative");
}

inline double Score(const LinearModel& model, std::span<const double> x) {
  CheckDims(model, x);
  double s = model.weights[0];
  for (std::size_t k = 0; k < x.size(); ++k) s += model.weights[k + 1] * x[k];
  return s;
}

// Step prediction 1[score >= 0], in {0, 1}.
inline int Predict(const LinearModel& model, std::span<const double> x) {
  return Score(model, x) >= 0.0 ? 1 : 0;
}

// w + eta (y - yhat) (1, x). No change on a correct prediction.
inline LinearModel PerceptronUpdate(const LinearModel& model, std::span<const double> x, int y,
                                    double eta) {
  CheckEta(eta);
  Require(y == 0 || y == 1, ErrorKind::kOutOfRange, "label must be 0 or 1");
  const int error = y - Predict(model, x);
  if (error == 0) return model;
  LinearModel next = model;
  const double step = eta * error;
  next.weights[0] += step;
  for (std::size_t k = 0; k < x.size(); ++k) next.weights[k + 1] += step * x[k];
  return next;
}

struct WarmStartParams {
  std::size_t sample_size = 1000;
  std::size_t rounds = 1000;
  double eta = 0.5;
  std::uint64_t seed = 0;
};

namespace internal {

// Partial Fisher-Yates: the first `sample_size` entries of a shuffled 0..n-1.
inline std::vector<std::size_t> DrawSubsample(Rng& rng, std::size_t n, std::size_t sample_size) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < sample_size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.Below(n - i));
    std::swap(order[i], order[j]);
  }
  order.resize(sample_size);
  return order;
}

}  // namespace internal

// Pool indices WarmStart trains on for these params.
inline std::vector<std::size_t> WarmStartSubsample(std::size_t pool_size, const WarmStartParams& params) {
  Require(params.sample_size <= pool_size, ErrorKind::kOutOfRange,
          "warm-start sample size " + std::to_string(params.sample_size) +
              " exceeds pool size " + std::to_string(pool_size));
  Rng rng(params.seed);
  return internal::DrawSubsample(rng, pool_size, params.sample_size);
}

// Uniform subsample without replacement, then `rounds` perceptron steps on
// points drawn with replacement from it, starting from zero weights.
inline LinearModel WarmStart(const LabeledPool& pool, const WarmStartParams& params) {
  Require(params.sample_size <= pool.size(), ErrorKind::kOutOfRange,
          "warm-start sample size " + std::to_string(params.sample_size) +
              " exceeds pool size " + std::to_string(pool.size()));
  Require(params.sample_size >= 1 || params.rounds == 0, ErrorKind::kOutOfRange,
          "warm-start needs a non-empty sample");
  for (int coin : pool.bias_coin) {
    Require(coin == 0, ErrorKind::kInvalidConfig, "warm start requires a fair-labeled pool");
  }
  CheckEta(params.eta);
  Rng rng(params.seed);
  const auto sample = internal::DrawSubsample(rng, pool.size(), params.sample_size);

  LinearModel model = LinearModel::Zero(FeatureCount(pool.points));
  for (std::size_t r = 0; r < params.rounds; ++r) {
    const std::size_t i = sample[static_cast<std::size_t>(rng.Below(params.sample_size))];
    model = PerceptronUpdate(model, pool.points[i].features, pool.labels[i], params.eta);
  }
  return model;
}

inline nlohmann::json ModelToJson(const LinearModel& model, std::size_t round) {
  return nlohmann::json{{"weights", model.weights}, {"round", round}};
}

inline LinearModel ModelFromJson(const nlohmann::json& j) {
  Require(j.is_object() && j.contains("weights") && j["weights"].is_array(), ErrorKind::kIo,
          "model JSON needs a 'weights' array");
  LinearModel model{j["weights"].get<std::vector<double>>()};
  Require(model.weights.size() >= 2, ErrorKind::kIo, "model needs an intercept and a feature");
  return model;
}

}  // namespace fairsim

#endif  // FAIRSIM_LEARNER_HPP_
