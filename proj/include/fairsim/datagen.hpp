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

#ifndef FAIRSIM_DATAGEN_HPP_
#define FAIRSIM_DATAGEN_HPP_

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "fairsim/csv.hpp"
#include "fairsim/error.hpp"
#include "fairsim/random.hpp"

namespace fairsim {

struct UniformDist {
  double lo = 0.0;
  double hi = 1.0;
};

struct NormalDist {
  double mean = 0.0;
  double stddev = 1.0;
};

// Only uniform and normal marginals are generated; a categorical
// alternative would slot in here.
using Distribution = std::variant<UniformDist, NormalDist>;

// Per-proxy pair of normals, selected by the protected value.
struct ProxySpec {
  NormalDist when_group0;
  NormalDist when_group1;
};

struct GenConfig {
  double p_group = 0.5;
  int m1 = 0;
  int m2 = 0;
  std::vector<Distribution> harmless_dists;
  std::vector<ProxySpec> proxy_dists;
  std::size_t n = 1;
  std::uint64_t seed = 0;

  int num_features() const { return m1 + m2; }
};

struct DataPoint {
  std::vector<double> features;
  int protected_attr = 0;  // a_i in {0, 1}; never a learner input
};

inline void Validate(const GenConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kInvalidConfig, what); };
  if (!(cfg.p_group >= 0.0 && cfg.p_group <= 1.0)) fail("p_group must lie in [0,1]");
  if (cfg.m1 < 0 || cfg.m2 < 0) fail("m1 and m2 must be non-negative");
  if (cfg.m1 + cfg.m2 < 1) fail("need at least one attribute (m1 + m2 >= 1)");
  if (cfg.n < 1) fail("n must be >= 1");
  if (static_cast<int>(cfg.harmless_dists.size()) != cfg.m1) {
    fail("harmless_dists has " + std::to_string(cfg.harmless_dists.size()) +
         " entries, m1 = " + std::to_string(cfg.m1));
  }
  if (static_cast<int>(cfg.proxy_dists.size()) != cfg.m2) {
    fail("proxy_dists has " + std::to_string(cfg.proxy_dists.size()) +
         " entries, m2 = " + std::to_string(cfg.m2));
  }
  auto check_normal = [&](const NormalDist& d) {
    if (!(d.stddev > 0.0) || !std::isfinite(d.stddev) || !std::isfinite(d.mean)) {
      fail("normal distribution needs finite mean and std > 0");
    }
  };
  for (const auto& dist : cfg.harmless_dists) {
    if (const auto* normal = std::get_if<NormalDist>(&dist)) {
      check_normal(*normal);
    } else {
      const auto& uniform = std::get<UniformDist>(dist);
      if (!(uniform.lo <= uniform.hi) || !std::isfinite(uniform.lo) ||
          !std::isfinite(uniform.hi)) {
        fail("uniform distribution needs finite lo <= hi");
      }
    }
  }
  for (const auto& proxy : cfg.proxy_dists) {
    check_normal(proxy.when_group0);
    check_normal(proxy.when_group1);
  }
}

// One harmless uniform[0,1] attribute and two opposite-direction proxies
// with std 0.12, on 12000 points at p_group = 0.5.
inline GenConfig DefaultConfig() {
  GenConfig cfg;
  cfg.p_group = 0.5;
  cfg.n = 12000;
  cfg.m1 = 1;
  cfg.m2 = 2;
  cfg.harmless_dists = {UniformDist{0.0, 1.0}};
  cfg.proxy_dists = {
      ProxySpec{NormalDist{0.35, 0.12}, NormalDist{0.65, 0.12}},
      ProxySpec{NormalDist{0.65, 0.12}, NormalDist{0.35, 0.12}},
  };
  cfg.seed = 0;
  return cfg;
}

// Draw order per point: protected attribute, then harmless attributes left to
// right, then proxies left to right. Uniform costs one engine draw, normal two.
inline std::vector<DataPoint> GeneratePool(const GenConfig& cfg) {
  Validate(cfg);
  Rng rng(cfg.seed);
  std::vector<DataPoint> pool(cfg.n);
  for (auto& point : pool) {
    point.protected_attr = rng.Bernoulli(cfg.p_group) ? 1 : 0;
    point.features.reserve(static_cast<std::size_t>(cfg.num_features()));
    for (const auto& dist : cfg.harmless_dists) {
      point.features.push_back(std::visit(
          [&rng](const auto& d) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(d)>, UniformDist>) {
              return rng.Uniform(d.lo, d.hi);
            } else {
              return rng.Normal(d.mean, d.stddev);
            }
          },
          dist));
    }
    for (const auto& proxy : cfg.proxy_dists) {
      const NormalDist& d = point.protected_attr == 1 ? proxy.when_group1 : proxy.when_group0;
      point.features.push_back(rng.Normal(d.mean, d.stddev));
    }
  }
  return pool;
}

inline std::size_t FeatureCount(const std::vector<DataPoint>& pool) {
  return pool.empty() ? 0 : pool.front().features.size();
}

inline std::string FeatureHeader(std::size_t m) {
  std::string header;
  for (std::size_t j = 0; j < m; ++j) {
    if (j > 0) header += ',';
    header += 'x' + std::to_string(j + 1);
  }
  return header;
}

// `x1,...,xm,protected`
inline std::string PoolToCsv(const std::vector<DataPoint>& pool) {
  const std::size_t m = FeatureCount(pool);
  std::ostringstream out;
  out << FeatureHeader(m) << ",protected\n";
  for (const auto& point : pool) {
    for (double x : point.features) out << csv::FormatDouble(x) << ',';
    out << point.protected_attr << '\n';
  }
  return out.str();
}

inline std::size_t CountFeatureColumns(const csv::Table& table) {
  std::size_t m = 0;
  while (table.Column("x" + std::to_string(m + 1)) == static_cast<int>(m)) ++m;
  Require(m >= 1, ErrorKind::kIo, "CSV must start with columns x1..xm");
  return m;
}

inline std::vector<DataPoint> PoolFromTable(const csv::Table& table) {
  const std::size_t m = CountFeatureColumns(table);
  const int protected_col = table.Column("protected");
  Require(protected_col >= 0, ErrorKind::kIo, "CSV lacks a 'protected' column");
  std::vector<DataPoint> pool;
  pool.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    DataPoint point;
    point.features.reserve(m);
    for (std::size_t j = 0; j < m; ++j) point.features.push_back(csv::ParseDouble(row[j]));
    const long long a = csv::ParseInt(row[static_cast<std::size_t>(protected_col)]);
    Require(a == 0 || a == 1, ErrorKind::kIo, "protected must be 0 or 1");
    point.protected_attr = static_cast<int>(a);
    pool.push_back(std::move(point));
  }
  return pool;
}

inline std::vector<DataPoint> PoolFromCsv(const std::string& text) {
  std::istringstream in(text);
  return PoolFromTable(csv::Read(in));
}

}  // namespace fairsim

#endif  // FAIRSIM_DATAGEN_HPP_
