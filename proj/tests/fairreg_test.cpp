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
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fairsim/datagen.hpp"
#include "fairsim/fairreg.hpp"
#include "fairsim/learner.hpp"
#include "fairsim/random.hpp"
#include "fairsim/usermodel.hpp"
#include "oracles.hpp"

namespace fairsim {
namespace {

FairRegularizer Direction(std::vector<double> w_reg, double lambda) {
  FairRegularizer reg;
  const auto m = static_cast<Eigen::Index>(w_reg.size());
  reg.w_reg = Eigen::Map<Eigen::VectorXd>(w_reg.data(), m);
  reg.w_a = Eigen::VectorXd::Zero(m);
  reg.sigma_x = Eigen::MatrixXd::Identity(m, m);
  reg.lambda = lambda;
  return reg;
}

LabeledPool SmallPool(std::uint64_t seed, std::size_t n) {
  GenConfig cfg = DefaultConfig();
  cfg.seed = seed;
  cfg.n = n;
  UserConfig user = DefaultUser(0.3);
  user.seed = seed + 5;
  return LabelPool(GeneratePool(cfg), user);
}

std::vector<double> GradientDescentOracle(const LabeledPool& pool, const std::vector<double>& padded,
                                          double lambda) {
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    std::vector<double> row = {1.0};
    row.insert(row.end(), pool.points[i].features.begin(), pool.points[i].features.end());
    rows.push_back(row);
    y.push_back(pool.labels[i]);
  }
  return oracle::GradientDescent(rows, y, padded, lambda);
}

TEST(FitAuxiliaryTest, ExactProxyRecoversUnitWeight) {
  Rng rng(3);
  std::vector<DataPoint> points;
  for (int i = 0; i < 2000; ++i) {
    const int a = rng.Bernoulli(0.5) ? 1 : 0;
    points.push_back(DataPoint{{rng.Uniform01(), static_cast<double>(a), rng.Normal(0.0, 1.0)}, a});
  }
  const FairRegularizer reg = FitAuxiliary(points, 1e-12);
  EXPECT_NEAR(reg.w_a[0], 0.0, 1e-8);
  EXPECT_NEAR(reg.w_a[1], 1.0, 1e-8);
  EXPECT_NEAR(reg.w_a[2], 0.0, 1e-8);
}

TEST(FitAuxiliaryTest, ConstantProtectedGivesZeroDirection) {
  GenConfig cfg = DefaultConfig();
  cfg.p_group = 1.0;
  cfg.n = 500;
  const FairRegularizer reg = FitAuxiliary(GeneratePool(cfg), 1e-3);
  EXPECT_EQ(reg.w_a.norm(), 0.0);
  EXPECT_EQ(reg.w_reg.norm(), 0.0);
}

TEST(FitAuxiliaryTest, DefaultPoolSigns) {
  const FairRegularizer reg = FitAuxiliary(GeneratePool(DefaultConfig()), 1e-3);
  EXPECT_GT(reg.w_a[1], 0.0);
  EXPECT_LT(reg.w_a[2], 0.0);
  EXPECT_LT(std::abs(reg.w_a[0]), 0.1 * std::abs(reg.w_a[1]));
}

TEST(FitAuxiliaryTest, CovarianceIsSymmetricPsdAndDirectionConsistent) {
  const FairRegularizer reg = FitAuxiliary(SmallPool(4, 3000).points, 1e-3);
  EXPECT_LT((reg.sigma_x - reg.sigma_x.transpose()).norm(), 1e-15);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reg.sigma_x);
  EXPECT_GE(eig.eigenvalues().minCoeff(), 0.0);
  EXPECT_LT((reg.w_reg - reg.sigma_x * reg.w_a).norm(), 1e-15);
}

TEST(FitAuxiliaryTest, NormalEquationResidualAtZeroRidge) {
  const auto points = SmallPool(5, 2000).points;
  const FairRegularizer reg = FitAuxiliary(points, 0.0);
  // Rebuild the centered system independently.
  const std::size_t n = points.size();
  std::vector<double> mean(3, 0.0);
  double a_mean = 0.0;
  for (const auto& p : points) {
    for (std::size_t k = 0; k < 3; ++k) mean[k] += p.features[k] / static_cast<double>(n);
    a_mean += p.protected_attr / static_cast<double>(n);
  }
  Eigen::Matrix3d lhs = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (const auto& p : points) {
    Eigen::Vector3d xc;
    for (std::size_t k = 0; k < 3; ++k) xc[static_cast<Eigen::Index>(k)] = p.features[k] - mean[k];
    lhs += xc * xc.transpose();
    rhs += xc * (p.protected_attr - a_mean);
  }
  EXPECT_LE((lhs * reg.w_a - rhs).norm() / rhs.norm(), 1e-10);
}

TEST(FitAuxiliaryTest, DuplicatedFeatureIsSingularWithoutRidge) {
  Rng rng(8);
  std::vector<DataPoint> points;
  for (int i = 0; i < 100; ++i) {
    const double v = rng.Uniform01();
    points.push_back(DataPoint{{v, v}, i % 2});
  }
  try {
    FitAuxiliary(points, 0.0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingular);
  }
  EXPECT_NO_THROW(FitAuxiliary(points, 1e-3));
}

TEST(FitAuxiliaryTest, RejectsDegenerateInputs) {
  EXPECT_THROW(FitAuxiliary({DataPoint{{0.1}, 1}}, 1e-3), Error);
  EXPECT_THROW(FitAuxiliary({DataPoint{{0.1}, 1}, DataPoint{{0.1}, 0}}, 1e-3), Error);
  EXPECT_THROW(FitAuxiliary({DataPoint{{0.1}, 1}, DataPoint{{0.2}, 0}}, -1.0), Error);
}

TEST(SolveExactTest, TwoPointHandSolved) {
  Eigen::MatrixXd x(2, 2);
  x << 1, 1, 0, 1;
  Eigen::VectorXd y(2);
  y << 0, 1;
  const LinearModel w = SolveExact(x, y, Direction({0.0}, 0.0));
  EXPECT_NEAR(w.weights[0], 0.0, 1e-14);
  EXPECT_NEAR(w.weights[1], 1.0, 1e-14);
}

TEST(SolveExactTest, ZeroLambdaIsLeastSquares) {
  const LabeledPool pool = SmallPool(9, 400);
  const LinearModel w = SolveExact(pool, Direction({0.3, -0.2, 0.9}, 0.0));
  const Eigen::MatrixXd design = AugmentedDesign(pool.points);
  const Eigen::VectorXd ls = design.transpose().bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(LabelVector(pool));
  for (Eigen::Index k = 0; k < 4; ++k) EXPECT_NEAR(w.weights[static_cast<std::size_t>(k)], ls[k], 1e-9);
}

TEST(SolveExactTest, LargeLambdaSuppressesPenalizedCoordinate) {
  const LabeledPool pool = SmallPool(10, 400);
  const double free_w2 = SolveExact(pool, Direction({0, 1, 0}, 0.0)).weights[2];
  double previous = std::abs(free_w2);
  for (double lambda : {1e2, 1e4, 1e6}) {
    const double w2 = std::abs(SolveExact(pool, Direction({0, 1, 0}, lambda)).weights[2]);
    EXPECT_LT(w2, previous);
    previous = w2;
  }
  EXPECT_LT(previous, 1e-3 * std::abs(free_w2));
}

TEST(SolveExactTest, MatchesGradientDescentOracle) {
  const LabeledPool pool = SmallPool(11, 200);
  const FairRegularizer reg = FitAuxiliary(pool.points, 1e-3).WithLambda(10.0);
  const LinearModel w = SolveExact(pool, reg);
  EXPECT_LE(NormalEquationResidual(AugmentedDesign(pool.points), LabelVector(pool), reg, w), 1e-8);
  const auto reference = GradientDescentOracle(pool, reg.PaddedDirection(), reg.lambda);
  EXPECT_LE(oracle::RelativeError(w.weights, reference), 1e-3);
}

TEST(SolveExactTest, SingularDesign) {
  // Feature identical to the intercept row.
  Eigen::MatrixXd x(2, 3);
  x << 1, 1, 1, 1, 1, 1;
  Eigen::VectorXd y(3);
  y << 0, 1, 1;
  try {
    SolveExact(x, y, Direction({0.0}, 0.0));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingular);
  }
}

TEST(SolveExactTest, ShapeErrors) {
  Eigen::MatrixXd x(2, 1);
  x << 1, 0.5;
  Eigen::VectorXd y(1);
  y << 1;
  EXPECT_THROW(SolveExact(x, y, Direction({0.0}, 0.0)), Error);
  Eigen::VectorXd y2(2);
  EXPECT_THROW(SolveExact(Eigen::MatrixXd::Ones(2, 3), y2, Direction({0.0}, 0.0)), Error);
}

TEST(RegularizedUpdateTest, ZeroLambdaIsBitwisePerceptron) {
  Rng rng(12);
  const FairRegularizer reg = Direction({0.2, -0.7, 0.4}, 0.0);
  for (int trial = 0; trial < 200; ++trial) {
    const LinearModel m{{rng.Uniform(-1, 1), rng.Uniform(-1, 1), rng.Uniform(-1, 1), rng.Uniform(-1, 1)}};
    const std::vector<double> x = {rng.Uniform01(), rng.Uniform01(), rng.Uniform01()};
    const int y = rng.Bernoulli(0.5) ? 1 : 0;
    ASSERT_EQ(RegularizedUpdate(m, x, y, 0.03, reg), PerceptronUpdate(m, x, y, 0.03));
  }
}

TEST(RegularizedUpdateTest, OrthogonalDirectionCorrectPrediction) {
  const LinearModel w{{0, 1, 0, 0}};
  const std::vector<double> x = {0.5, 0.0, 0.0};  // score 0.5, predicts 1
  EXPECT_EQ(RegularizedUpdate(w, x, 1, 0.1, Direction({0, 1, 0}, 0.5)), w);
}

TEST(RegularizedUpdateTest, PenaltyArithmetic) {
  const LinearModel w{{0, 1, 0, 0}};
  const std::vector<double> x = {0.5, 0.0, 0.0};
  const LinearModel next = RegularizedUpdate(w, x, 1, 0.1, Direction({1, 0, 0}, 0.5));
  EXPECT_EQ(next.weights, (std::vector<double>{0.0, 0.5, 0.0, 0.0}));
}

TEST(RegularizedUpdateTest, PenaltyAppliesOnMistakeRoundsToo) {
  const LinearModel w{{-1, 1, 0, 0}};
  const std::vector<double> x = {0.5, 0.0, 0.0};  // score -0.5, predicts 0
  const LinearModel next = RegularizedUpdate(w, x, 1, 0.1, Direction({1, 0, 0}, 0.5));
  // Perceptron: (-0.9, 1.05, 0, 0); penalty uses the old dot product 1.
  EXPECT_NEAR(next.weights[0], -0.9, 1e-15);
  EXPECT_NEAR(next.weights[1], 0.55, 1e-15);
}

TEST(RegularizedUpdateTest, OrthogonalityDecaysGeometrically) {
  const FairRegularizer reg = Direction({0.6, -0.3, 0.2}, 1.5);
  const double norm2 = reg.w_reg.squaredNorm();
  const double factor = 1.0 - reg.lambda * norm2;
  ASSERT_GT(factor, 0.0);
  ASSERT_LT(factor, 1.0);
  auto dot = [&](const LinearModel& m) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < 3; ++k) s += m.weights[static_cast<std::size_t>(k) + 1] * reg.w_reg[k];
    return s;
  };
  LinearModel m{{0.2, 1.0, 2.0, -0.5}};
  double previous = dot(m);
  // eta = 0 isolates the penalty term.
  for (int n = 0; n < 30; ++n) {
    m = RegularizedUpdate(m, std::vector<double>{0.1, 0.2, 0.3}, 1, 0.0, reg);
    const double current = dot(m);
    EXPECT_NEAR(current, factor * previous, 1e-12);
    previous = current;
  }
  EXPECT_LT(std::abs(previous), 1e-6);
  EXPECT_DOUBLE_EQ(m.weights[0], 0.2);
}

TEST(RegularizedUpdateTest, DimensionMismatch) {
  EXPECT_THROW(RegularizedUpdate(LinearModel::Zero(2), std::vector<double>{0.1, 0.2}, 1, 0.1,
                                 Direction({1, 0, 0}, 0.5)),
               Error);
  EXPECT_THROW(Direction({1.0}, 0.0).WithLambda(-1.0), Error);
}

}  // namespace
}  // namespace fairsim
