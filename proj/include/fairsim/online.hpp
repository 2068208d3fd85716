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

#ifndef FAIRSIM_ONLINE_HPP_
#define FAIRSIM_ONLINE_HPP_

#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fairsim/error.hpp"
#include "fairsim/fairreg.hpp"
#include "fairsim/learner.hpp"
#include "fairsim/usermodel.hpp"

namespace fairsim {

struct Snapshot {
  std::size_t round = 0;  // rounds completed when captured
  LinearModel model;
};

struct OnlineTrace {
  std::vector<std::size_t> shown_order;  // pool indices, no duplicates
  std::vector<Snapshot> snapshots;
};

struct OnlineResult {
  LinearModel model;
  OnlineTrace trace;
};

struct OnlineParams {
  std::size_t rounds = 1000;
  double eta = 0.01;
  std::size_t snapshot_interval = 25;  // 0 disables snapshots
};

// Greedy personalization loop. Each round scores every unused point, shows
// the argmax (ties to the lowest index), and updates on its stored label.
inline OnlineResult RunOnline(const LinearModel& initial, const LabeledPool& pool,
                              const OnlineParams& params,
                              const FairRegularizer* regularizer = nullptr) {
  Require(params.rounds <= pool.size(), ErrorKind::kOutOfRange,
          "online rounds " + std::to_string(params.rounds) + " exceed pool size " +
              std::to_string(pool.size()));
  CheckEta(params.eta);
  const std::size_t m = FeatureCount(pool.points);
  Require(initial.weights.size() == m + 1, ErrorKind::kDimensionMismatch,
          "model has " + std::to_string(initial.weights.size()) + " weights for " +
              std::to_string(m) + " features");

  // Row-major copy of the pool features for the per-round scan.
  std::vector<double> features(pool.size() * m);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t k = 0; k < m; ++k) features[i * m + k] = pool.points[i].features[k];
  }

  OnlineResult result{initial, {}};
  result.trace.shown_order.reserve(params.rounds);
  std::vector<char> used(pool.size(), 0);
  for (std::size_t round = 1; round <= params.rounds; ++round) {
    const auto& w = result.model.weights;
    std::size_t best = pool.size();
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      double s = w[0];
      const double* x = &features[i * m];
      for (std::size_t k = 0; k < m; ++k) s += w[k + 1] * x[k];
      if (best == pool.size() || s > best_score) {
        best = i;
        best_score = s;
      }
    }
    used[best] = 1;
    result.trace.shown_order.push_back(best);
    const auto& point = pool.points[best];
    result.model = regularizer != nullptr
                       ? RegularizedUpdate(result.model, point.features, pool.labels[best],
                                           params.eta, *regularizer)
                       : PerceptronUpdate(result.model, point.features, pool.labels[best],
                                          params.eta);
    Require(result.model.IsFinite(), ErrorKind::kUndefined,
            "weights became non-finite at round " + std::to_string(round));
    if (params.snapshot_interval > 0 && round % params.snapshot_interval == 0) {
      result.trace.snapshots.push_back(Snapshot{round, result.model});
    }
  }
  return result;
}

// `round,pool_index,label,protected`; round is 1-based.
inline std::string TraceToCsv(const OnlineTrace& trace, const LabeledPool& pool) {
  std::ostringstream out;
  out << "round,pool_index,label,protected\n";
  for (std::size_t r = 0; r < trace.shown_order.size(); ++r) {
    const std::size_t i = trace.shown_order[r];
    out << r + 1 << ',' << i << ',' << pool.labels[i] << ',' << pool.points[i].protected_attr
        << '\n';
  }
  return out.str();
}

}  // namespace fairsim

#endif  // FAIRSIM_ONLINE_HPP_
