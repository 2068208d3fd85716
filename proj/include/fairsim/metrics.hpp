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

#ifndef FAIRSIM_METRICS_HPP_
#define FAIRSIM_METRICS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <ranges>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairsim/datagen.hpp"
#include "fairsim/error.hpp"
#include "fairsim/learner.hpp"
#include "fairsim/usermodel.hpp"

namespace fairsim {

// Proportions are clamped here before taking logs, so an empty group in a
// prefix yields a large negative (but finite) skew.
inline constexpr double kProportionFloor = 1e-6;

struct Baseline {
  std::array<double, 2> p_qualified{0.0, 0.0};  // indexed by protected value
  std::size_t qualified_count = 0;
};

struct MetricsReport {
  std::map<std::size_t, double> skew_at;
  double ndcs = 0.0;
  std::map<std::size_t, double> precision_at;
  std::map<std::size_t, std::size_t> counts_at;  // group-v count in top k
};

// Qualified = accepted by the user's linear rule; p_bias is ignored.
inline Baseline ComputeBaseline(const std::vector<DataPoint>& pool, const UserConfig& fair_user) {
  std::array<std::size_t, 2> counts{0, 0};
  for (const auto& point : pool) {
    if (FairLabel(fair_user.weights, point.features) == 1) ++counts[static_cast<std::size_t>(point.protected_attr)];
  }
  Baseline baseline;
  baseline.qualified_count = counts[0] + counts[1];
  Require(baseline.qualified_count >= 1, ErrorKind::kUndefined,
          "no qualified candidates; baseline undefined");
  for (std::size_t v = 0; v < 2; ++v) {
    baseline.p_qualified[v] =
        static_cast<double>(counts[v]) / static_cast<double>(baseline.qualified_count);
  }
  return baseline;
}

namespace internal {

inline void CheckGroup(int v) {
  Require(v == 0 || v == 1, ErrorKind::kOutOfRange, "protected value must be 0 or 1");
}

inline void CheckCutoff(std::size_t k, std::size_t length, const char* what) {
  Require(k >= 1 && k <= length, ErrorKind::kOutOfRange,
          std::string(what) + " = " + std::to_string(k) + " outside [1, " +
              std::to_string(length) + "]");
}

inline double LogRatio(std::size_t count, std::size_t k, double base) {
  const double p = static_cast<double>(count) / static_cast<double>(k);
  return std::log(std::max(p, kProportionFloor) / std::max(base, kProportionFloor));
}

}  // namespace internal

// The projection maps a ranked element to its protected value (or label
// for PrecisionAtK). Works on std::vector<DataPoint> with
// &DataPoint::protected_attr, or directly on std::vector<int>.
template <std::ranges::random_access_range R, typename Proj = std::identity>
std::size_t CountInTop(const R& ranking, std::size_t k, int value, Proj proj = {}) {
  std::size_t count = 0;
  auto it = std::ranges::begin(ranking);
  for (std::size_t j = 0; j < k; ++j, ++it) {
    if (static_cast<int>(std::invoke(proj, *it)) == value) ++count;
  }
  return count;
}

// ln(p_{v@k} / p_{v,qualified}), both floored at kProportionFloor.
template <std::ranges::random_access_range R, typename Proj = std::identity>
double SkewAtK(const R& ranking, std::size_t k, const Baseline& baseline, int v, Proj proj = {}) {
  internal::CheckGroup(v);
  internal::CheckCutoff(k, static_cast<std::size_t>(std::ranges::size(ranking)), "k");
  return internal::LogRatio(CountInTop(ranking, k, v, proj), k,
                            baseline.p_qualified[static_cast<std::size_t>(v)]);
}

inline double DiscountWeight(std::size_t j) { return 1.0 / std::log2(static_cast<double>(j) + 1.0); }

// Discount-weighted mean of Skew_v@j for j = 1..k_max.
template <std::ranges::random_access_range R, typename Proj = std::identity>
double Ndcs(const R& ranking, std::size_t k_max, const Baseline& baseline, int v, Proj proj = {}) {
  internal::CheckGroup(v);
  internal::CheckCutoff(k_max, static_cast<std::size_t>(std::ranges::size(ranking)), "k_max");
  const double base = baseline.p_qualified[static_cast<std::size_t>(v)];
  double weighted = 0.0;
  double normalizer = 0.0;
  std::size_t count = 0;
  auto it = std::ranges::begin(ranking);
  for (std::size_t j = 1; j <= k_max; ++j, ++it) {
    if (static_cast<int>(std::invoke(proj, *it)) == v) ++count;
    const double discount = DiscountWeight(j);
    weighted += discount * internal::LogRatio(count, j, base);
    normalizer += discount;
  }
  return weighted / normalizer;
}

template <std::ranges::random_access_range R, typename Proj = std::identity>
double PrecisionAtK(const R& labels_in_rank_order, std::size_t k, Proj proj = {}) {
  internal::CheckCutoff(k, static_cast<std::size_t>(std::ranges::size(labels_in_rank_order)), "k");
  return static_cast<double>(CountInTop(labels_in_rank_order, k, 1, proj)) /
         static_cast<double>(k);
}

// Pool indices by decreasing model score; equal scores keep index order.
inline std::vector<std::size_t> RankByModel(const LinearModel& model,
                                            const std::vector<DataPoint>& points) {
  std::vector<double> scores(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) scores[i] = Score(model, points[i].features);
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

// Protected values and labels laid out in rank order.
struct RankedLabels {
  std::vector<int> groups;
  std::vector<int> labels;
};

inline RankedLabels Arrange(const LabeledPool& pool, std::span<const std::size_t> order) {
  RankedLabels ranked;
  ranked.groups.reserve(order.size());
  ranked.labels.reserve(order.size());
  for (std::size_t i : order) {
    ranked.groups.push_back(pool.points[i].protected_attr);
    ranked.labels.push_back(pool.labels[i]);
  }
  return ranked;
}

inline MetricsReport Evaluate(const RankedLabels& ranked, std::span<const std::size_t> ks,
                              std::size_t ndcs_k_max, const Baseline& baseline, int v = 1) {
  MetricsReport report;
  for (std::size_t k : ks) {
    report.skew_at[k] = SkewAtK(ranked.groups, k, baseline, v);
    report.precision_at[k] = PrecisionAtK(ranked.labels, k);
    report.counts_at[k] = CountInTop(ranked.groups, k, v);
  }
  report.ndcs = Ndcs(ranked.groups, ndcs_k_max, baseline, v);
  return report;
}

inline nlohmann::json BaselineToJson(const Baseline& baseline) {
  return nlohmann::json{{"p_qualified", {{"0", baseline.p_qualified[0]}, {"1", baseline.p_qualified[1]}}},
                        {"qualified_count", baseline.qualified_count}};
}

inline Baseline BaselineFromJson(const nlohmann::json& j) {
  try {
    Baseline baseline;
    const auto& p = j.at("p_qualified");
    baseline.p_qualified[0] = p.at("0").get<double>();
    baseline.p_qualified[1] = p.at("1").get<double>();
    baseline.qualified_count = j.at("qualified_count").get<std::size_t>();
    Require(baseline.qualified_count >= 1, ErrorKind::kIo, "qualified_count must be >= 1");
    Require(std::abs(baseline.p_qualified[0] + baseline.p_qualified[1] - 1.0) < 1e-9, ErrorKind::kIo,
            "baseline proportions must sum to 1");
    return baseline;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kIo, std::string("bad baseline JSON: ") + e.what());
  }
}

}  // namespace fairsim

#endif  // FAIRSIM_METRICS_HPP_
