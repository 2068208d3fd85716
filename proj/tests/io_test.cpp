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

#include <cmath>
#include <functional>
#include <sstream>

#include <gtest/gtest.h>

#include "fairsim/csv.hpp"
#include "fairsim/datagen.hpp"
#include "fairsim/fairreg.hpp"
#include "fairsim/learner.hpp"
#include "fairsim/metrics.hpp"
#include "fairsim/usermodel.hpp"

namespace fairsim {
namespace {

void ExpectIoError(const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "no error raised";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo) << e.what();
  }
}

TEST(CsvTest, DoublesRoundTripExactly) {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const double v = rng.Normal(0.0, 1e3) * std::pow(10.0, rng.Uniform(-20, 20));
    ASSERT_EQ(csv::ParseDouble(csv::FormatDouble(v)), v);
  }
}

TEST(CsvTest, SplitAndParse) {
  EXPECT_EQ(csv::SplitLine("a,,b"), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(csv::ParseInt("42"), 42);
  ExpectIoError([] { csv::ParseInt("4.2"); });
  ExpectIoError([] { csv::ParseDouble(""); });
  ExpectIoError([] { csv::ParseDouble("1.5x"); });
}

TEST(PoolCsvTest, RoundTripOverSeeds) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GenConfig cfg = DefaultConfig();
    cfg.seed = seed;
    cfg.n = 300;
    const auto pool = GeneratePool(cfg);
    const auto back = PoolFromCsv(PoolToCsv(pool));
    ASSERT_EQ(back.size(), pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      ASSERT_EQ(back[i].features, pool[i].features);
      ASSERT_EQ(back[i].protected_attr, pool[i].protected_attr);
    }
    UserConfig user = DefaultUser(0.5);
    user.seed = seed;
    const auto labeled = LabelPool(pool, user);
    const auto labeled_back = LabeledPoolFromCsv(LabeledPoolToCsv(labeled));
    EXPECT_EQ(labeled_back.labels, labeled.labels);
    EXPECT_EQ(labeled_back.bias_coin, labeled.bias_coin);
    EXPECT_EQ(PoolToCsv(labeled_back.points), PoolToCsv(pool));
  }
}

TEST(PoolCsvTest, HeaderLayout) {
  const std::vector<DataPoint> pool = {DataPoint{{0.5, 0.25}, 1}};
  EXPECT_EQ(PoolToCsv(pool), "x1,x2,protected\n0.5,0.25,1\n");
  LabeledPool labeled{pool, {0}, {1}};
  EXPECT_EQ(LabeledPoolToCsv(labeled), "x1,x2,protected,label,bias_coin\n0.5,0.25,1,0,1\n");
}

TEST(PoolCsvTest, MalformedInput) {
  ExpectIoError([] { PoolFromCsv(""); });
  ExpectIoError([] { PoolFromCsv("a,b,protected\n1,2,0\n"); });
  ExpectIoError([] { PoolFromCsv("x1,x2\n1,2\n"); });
  ExpectIoError([] { PoolFromCsv("x1,protected\n0.1,2\n"); });
  ExpectIoError([] { PoolFromCsv("x1,protected\n0.1\n"); });
  ExpectIoError([] { PoolFromCsv("x1,protected\nabc,1\n"); });
  ExpectIoError([] { LabeledPoolFromCsv("x1,protected\n0.1,1\n"); });
  ExpectIoError([] { LabeledPoolFromCsv("x1,protected,label\n0.1,1,3\n"); });
}

TEST(ModelJsonTest, RoundTripAndErrors) {
  const LinearModel m{{-0.48, 0.1234567890123456789, 1e-17, -3.0}};
  EXPECT_EQ(ModelFromJson(nlohmann::json::parse(ModelToJson(m, 7).dump())), m);
  EXPECT_THROW(ModelFromJson(nlohmann::json::parse(R"({"weights": "x"})")), Error);
  EXPECT_THROW(ModelFromJson(nlohmann::json::parse(R"({"weights": []})")), Error);
}

TEST(RegularizerJsonTest, RoundTrip) {
  GenConfig cfg = DefaultConfig();
  cfg.n = 800;
  const FairRegularizer reg = FitAuxiliary(GeneratePool(cfg), 1e-3).WithLambda(3.5);
  const FairRegularizer back = RegularizerFromJson(nlohmann::json::parse(RegularizerToJson(reg).dump()));
  EXPECT_EQ(back.w_a, reg.w_a);
  EXPECT_EQ(back.w_reg, reg.w_reg);
  EXPECT_EQ(back.sigma_x, reg.sigma_x);
  EXPECT_EQ(back.lambda, 3.5);
  EXPECT_EQ(back.alpha_a, 1e-3);
}

TEST(RegularizerJsonTest, Malformed) {
  ExpectIoError([] { RegularizerFromJson(nlohmann::json::parse(R"({"w_a": [1]})")); });
  ExpectIoError([] {
    RegularizerFromJson(nlohmann::json::parse(R"({"w_a": [1, 2], "w_reg": [1], "sigma_x": [[1]]})"));
  });
  ExpectIoError([] {
    RegularizerFromJson(nlohmann::json::parse(R"({"w_a": [1, 2], "w_reg": [1, 2], "sigma_x": [[1], [2]]})"));
  });
}

TEST(BaselineJsonTest, RoundTripAndErrors) {
  const Baseline b{{0.25, 0.75}, 8};
  const Baseline back = BaselineFromJson(nlohmann::json::parse(BaselineToJson(b).dump()));
  EXPECT_EQ(back.p_qualified, b.p_qualified);
  EXPECT_EQ(back.qualified_count, 8u);
  ExpectIoError([] {
    BaselineFromJson(nlohmann::json::parse(R"({"p_qualified": {"0": 0.5, "1": 0.6}, "qualified_count": 3})"));
  });
  ExpectIoError([] { BaselineFromJson(nlohmann::json::parse(R"({"p_qualified": {"0": 1.0}})")); });
}

}  // namespace
}  // namespace fairsim
