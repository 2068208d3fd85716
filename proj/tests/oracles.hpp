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

// Reference implementations used only by tests. Written directly from the
// definitions with plain loops; nothing here calls into the library.

#ifndef FAIRSIM_TESTS_ORACLES_HPP_
#define FAIRSIM_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace oracle {

// ln(p_v@k / p_v,qualified) with both proportions floored at 1e-6. The
// prefix is materialized and counted element by element.
inline double Skew(const std::vector<int>& ranking, std::size_t k, double base, int v) {
  const std::vector<int> prefix(ranking.begin(), ranking.begin() + static_cast<long>(k));
  double count = 0.0;
  for (int g : prefix) {
    if (g == v) count += 1.0;
  }
  const double p = count / static_cast<double>(prefix.size());
  const double floor = 0.000001;
  return std::log((p < floor ? floor : p) / (base < floor ? floor : base));
}

// (1/Z) sum_j Skew@j / log2(j+1), Z = sum_j 1/log2(j+1).
inline double Ndcs(const std::vector<int>& ranking, std::size_t k_max, double base, int v) {
  double z = 0.0;
  double total = 0.0;
  for (std::size_t j = 1; j <= k_max; ++j) {
    const double log2 = std::log(static_cast<double>(j + 1)) / std::log(2.0);
    z += 1.0 / log2;
    total += Skew(ranking, j, base, v) / log2;
  }
  return total / z;
}

// Minimizes 0.5 ||X^T w - y||^2 + 0.5 lambda (w . d)^2 by fixed-step
// gradient descent. `rows` holds intercept-augmented inputs.
inline std::vector<double> GradientDescent(const std::vector<std::vector<double>>& rows,
                                           const std::vector<double>& y, const std::vector<double>& d,
                                           double lambda) {
  const std::size_t dim = d.size();
  std::vector<std::vector<double>> a(dim, std::vector<double>(dim, 0.0));
  std::vector<double> b(dim, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t r = 0; r < dim; ++r) {
      b[r] += rows[i][r] * y[i];
      for (std::size_t c = 0; c < dim; ++c) a[r][c] += rows[i][r] * rows[i][c];
    }
  }
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) a[r][c] += lambda * d[r] * d[c];
  }
  double trace = 0.0;
  for (std::size_t r = 0; r < dim; ++r) trace += a[r][r];
  const double step = 1.0 / trace;
  std::vector<double> w(dim, 0.0);
  std::vector<double> grad(dim);
  for (int iter = 0; iter < 5000000; ++iter) {
    double norm2 = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
      grad[r] = -b[r];
      for (std::size_t c = 0; c < dim; ++c) grad[r] += a[r][c] * w[c];
      norm2 += grad[r] * grad[r];
    }
    if (std::sqrt(norm2) < 1e-11) break;
    for (std::size_t r = 0; r < dim; ++r) w[r] -= step * grad[r];
  }
  return w;
}

inline double RelativeError(const std::vector<double>& got, const std::vector<double>& want) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < got.size(); ++k) {
    num += (got[k] - want[k]) * (got[k] - want[k]);
    den += want[k] * want[k];
  }
  return std::sqrt(num / den);
}

// 1-based ranks, ties share their average rank.
inline std::vector<double> AverageRanks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

inline double Pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double Spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return Pearson(AverageRanks(x), AverageRanks(y));
}

// Probability that a random positive outscores a random negative, ties
// counted as one half. Quadratic; fine for a few thousand points.
inline double Auc(const std::vector<double>& scores, const std::vector<int>& positive) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (positive[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

}  // namespace oracle

#endif  // FAIRSIM_TESTS_ORACLES_HPP_
