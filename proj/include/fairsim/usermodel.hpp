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

#ifndef FAIRSIM_USERMODEL_HPP_
#define FAIRSIM_USERMODEL_HPP_

#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fairsim/csv.hpp"
#include "fairsim/datagen.hpp"
#include "fairsim/error.hpp"
#include "fairsim/random.hpp"

namespace fairsim {

struct UserConfig {
  double p_bias = 0.0;
  std::vector<double> weights;  // [w_0 (intercept), w_1, ..., w_m]
  std::uint64_t seed = 0;
};

struct LabeledPool {
  std::vector<DataPoint> points;
  std::vector<int> labels;     // 1 = accept
  std::vector<int> bias_coin;  // 1 = the user labeled by protected attribute

  std::size_t size() const { return points.size(); }
};

inline const std::vector<double>& DefaultUserWeights() {
  static const std::vector<double> weights = {-0.48, 0.35, 0.28, 0.28};
  return weights;
}

inline UserConfig DefaultUser(double p_bias) {
  Require(p_bias >= 0.0 && p_bias <= 1.0, ErrorKind::kOutOfRange,
          "p_bias must lie in [0,1]");
  return UserConfig{p_bias, DefaultUserWeights(), 0};
}

// w_0 + w.x for the user's rule.
inline double UserScore(std::span<const double> weights, std::span<const double> x) {
  Require(weights.size() == x.size() + 1, ErrorKind::kDimensionMismatch,
          "user weights have " + std::to_string(weights.size()) + " entries for " +
              std::to_string(x.size()) + " features");
  double s = weights[0];
  for (std::size_t k = 0; k < x.size(); ++k) s += weights[k + 1] * x[k];
  return s;
}

// Non-strict: a score of exactly zero is an accept.
inline int FairLabel(std::span<const double> weights, std::span<const double> x) {
  return UserScore(weights, x) >= 0.0 ? 1 : 0;
}

// One Bernoulli(p_bias) coin per point in pool order from user.seed. The
// coin is drawn even when p_bias is 0 or 1 so that streams stay aligned
// across bias levels.
inline LabeledPool LabelPool(const std::vector<DataPoint>& pool, const UserConfig& user) {
  Require(user.p_bias >= 0.0 && user.p_bias <= 1.0, ErrorKind::kOutOfRange,
          "p_bias must lie in [0,1]");
  LabeledPool out;
  out.points = pool;
  out.labels.reserve(pool.size());
  out.bias_coin.reserve(pool.size());
  Rng rng(user.seed);
  for (const auto& point : pool) {
    Require(point.features.size() + 1 == user.weights.size(), ErrorKind::kDimensionMismatch,
            "point has " + std::to_string(point.features.size()) +
                " features, user weights expect " +
                std::to_string(user.weights.size() - (user.weights.empty() ? 0 : 1)));
    const bool biased = rng.Bernoulli(user.p_bias);
    out.bias_coin.push_back(biased ? 1 : 0);
    out.labels.push_back(biased ? point.protected_attr : FairLabel(user.weights, point.features));
  }
  return out;
}

// `x1,...,xm,protected,label,bias_coin`
inline std::string LabeledPoolToCsv(const LabeledPool& pool) {
  const std::size_t m = FeatureCount(pool.points);
  std::ostringstream out;
  out << FeatureHeader(m) << ",protected,label,bias_coin\n";
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (double x : pool.points[i].features) out << csv::FormatDouble(x) << ',';
    out << pool.points[i].protected_attr << ',' << pool.labels[i] << ','
        << pool.bias_coin[i] << '\n';
  }
  return out.str();
}

inline LabeledPool LabeledPoolFromTable(const csv::Table& table) {
  LabeledPool pool;
  pool.points = PoolFromTable(table);
  const int label_col = table.Column("label");
  const int coin_col = table.Column("bias_coin");
  Require(label_col >= 0, ErrorKind::kIo, "CSV lacks a 'label' column");
  for (const auto& row : table.rows) {
    const long long y = csv::ParseInt(row[static_cast<std::size_t>(label_col)]);
    Require(y == 0 || y == 1, ErrorKind::kIo, "label must be 0 or 1");
    pool.labels.push_back(static_cast<int>(y));
    pool.bias_coin.push_back(
        coin_col >= 0 ? static_cast<int>(csv::ParseInt(row[static_cast<std::size_t>(coin_col)]))
                      : 0);
  }
  return pool;
}

inline LabeledPool LabeledPoolFromCsv(const std::string& text) {
  std::istringstream in(text);
  return LabeledPoolFromTable(csv::Read(in));
}

}  // namespace fairsim

#endif  // FAIRSIM_USERMODEL_HPP_
