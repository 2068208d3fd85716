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

#ifndef FAIRSIM_FAIRREG_HPP_
#define FAIRSIM_FAIRREG_HPP_

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fairsim/datagen.hpp"
#include "fairsim/error.hpp"
#include "fairsim/learner.hpp"
#include "fairsim/usermodel.hpp"

namespace fairsim {

// Covariance-projection penalty. `w_reg` is the direction along which model
// weights are penalized; it carries no intercept component.
struct FairRegularizer {
  Eigen::VectorXd w_a;      // auxiliary predictor of the protected attribute
  Eigen::MatrixXd sigma_x;  // (1/N) Xc Xc^T
  Eigen::VectorXd w_reg;    // sigma_x * w_a
  double lambda = 0.0;
  double alpha_a = 1e-3;

  std::size_t num_features() const { return static_cast<std::size_t>(w_reg.size()); }

  // w_reg with a leading 0 so it lines up with intercept-augmented weights.
  std::vector<double> PaddedDirection() const {
    std::vector<double> padded(num_features() + 1, 0.0);
    for (Eigen::Index k = 0; k < w_reg.size(); ++k) padded[static_cast<std::size_t>(k) + 1] = w_reg[k];
    return padded;
  }

  FairRegularizer WithLambda(double value) const {
    Require(value >= 0.0 && std::isfinite(value), ErrorKind::kOutOfRange,
            "lambda must be finite and non-negative");
    FairRegularizer copy = *this;
    copy.lambda = value;
    return copy;
  }
};

// Ridge fit of the centered protected attribute on centered features:
//   (Xc Xc^T + alpha_a N I) w_a = Xc Ac^T.
// The ridge term stands in for the norm budget on w_a.
inline FairRegularizer FitAuxiliary(const std::vector<DataPoint>& pool, double alpha_a) {
  Require(pool.size() >= 2, ErrorKind::kInvalidConfig, "auxiliary fit needs at least 2 points");
  Require(alpha_a >= 0.0 && std::isfinite(alpha_a), ErrorKind::kOutOfRange,
          "alpha_a must be finite and non-negative");
  const auto n = static_cast<Eigen::Index>(pool.size());
  const auto m = static_cast<Eigen::Index>(FeatureCount(pool));
  Require(m >= 1, ErrorKind::kDimensionMismatch, "points carry no features");

  Eigen::MatrixXd centered(m, n);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& point = pool[static_cast<std::size_t>(i)];
    Require(static_cast<Eigen::Index>(point.features.size()) == m, ErrorKind::kDimensionMismatch,
            "ragged feature vectors in pool");
    for (Eigen::Index k = 0; k < m; ++k) centered(k, i) = point.features[static_cast<std::size_t>(k)];
    target[i] = point.protected_attr;
  }
  const Eigen::VectorXd feature_mean = centered.rowwise().mean();
  centered.colwise() -= feature_mean;
  target.array() -= target.mean();
  Require(centered.rowwise().squaredNorm().maxCoeff() > 0.0, ErrorKind::kInvalidConfig,
          "every feature is constant; auxiliary fit undefined");

  const Eigen::MatrixXd gram = centered * centered.transpose();
  Eigen::MatrixXd system = gram;
  system.diagonal().array() += alpha_a * static_cast<double>(n);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(system);
  if (qr.rank() < m) {
    throw Error(ErrorKind::kSingular, "auxiliary normal equations are rank " +
                                          std::to_string(qr.rank()) + " < " + std::to_string(m) +
                                          " (degenerate features with alpha_a = 0)");
  }

  FairRegularizer reg;
  reg.alpha_a = alpha_a;
  reg.w_a = qr.solve(centered * target);
  reg.sigma_x = gram / static_cast<double>(n);
  reg.w_reg = reg.sigma_x * reg.w_a;
  return reg;
}

// Columns are (1, x_i): an (m+1) x N design matrix.
inline Eigen::MatrixXd AugmentedDesign(const std::vector<DataPoint>& points) {
  const auto m = static_cast<Eigen::Index>(FeatureCount(points));
  Eigen::MatrixXd design(m + 1, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    design(0, col) = 1.0;
    for (Eigen::Index k = 0; k < m; ++k) design(k + 1, col) = points[i].features[static_cast<std::size_t>(k)];
  }
  return design;
}

inline Eigen::VectorXd LabelVector(const LabeledPool& pool) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(pool.size()));
  for (std::size_t i = 0; i < pool.size(); ++i) y[static_cast<Eigen::Index>(i)] = pool.labels[i];
  return y;
}

namespace internal {

inline Eigen::VectorXd PaddedDirection(const FairRegularizer& reg) {
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(reg.w_reg.size() + 1);
  padded.tail(reg.w_reg.size()) = reg.w_reg;
  return padded;
}

inline void CheckSystem(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                        const FairRegularizer& reg) {
  Require(design.cols() == labels.size(), ErrorKind::kDimensionMismatch,
          "design has " + std::to_string(design.cols()) + " columns, labels " +
              std::to_string(labels.size()));
  Require(design.rows() == reg.w_reg.size() + 1, ErrorKind::kDimensionMismatch,
          "design rows must be regularizer features + 1");
  Require(design.cols() >= design.rows(), ErrorKind::kInvalidConfig,
          "exact solve needs N >= m + 1");
  Require(reg.lambda >= 0.0, ErrorKind::kOutOfRange, "lambda must be non-negative");
}

}  // namespace internal

// ||A w - b|| / ||b|| for A = X X^T + lambda w~ w~^T, b = X Y^T.
inline double NormalEquationResidual(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                                     const FairRegularizer& reg, const LinearModel& model) {
  internal::CheckSystem(design, labels, reg);
  const Eigen::VectorXd padded = internal::PaddedDirection(reg);
  const Eigen::MatrixXd lhs = design * design.transpose() + reg.lambda * padded * padded.transpose();
  const Eigen::VectorXd rhs = design * labels;
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      model.weights.data(), static_cast<Eigen::Index>(model.weights.size()));
  const double scale = rhs.norm() > 0.0 ? rhs.norm() : 1.0;
  return (lhs * w - rhs).norm() / scale;
}

// Solves (X X^T + lambda w~ w~^T) w = X Y^T with column-pivoted QR.
inline LinearModel SolveExact(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                              const FairRegularizer& reg) {
  internal::CheckSystem(design, labels, reg);
  const Eigen::VectorXd padded = internal::PaddedDirection(reg);
  const Eigen::MatrixXd lhs = design * design.transpose() + reg.lambda * padded * padded.transpose();
  const Eigen::VectorXd rhs = design * labels;
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(lhs);
  const auto r_diag = qr.matrixQR().diagonal().cwiseAbs();
  const double condition = r_diag.minCoeff() > 0.0 ? r_diag.maxCoeff() / r_diag.minCoeff()
                                                    : std::numeric_limits<double>::infinity();
  if (qr.rank() < lhs.rows()) {
    throw Error(ErrorKind::kSingular, "regularized normal equations are singular (rank " +
                                          std::to_string(qr.rank()) + ", R-diagonal ratio " +
                                          csv::FormatDouble(condition) + ")");
  }
  const Eigen::VectorXd w = qr.solve(rhs);
  LinearModel model{std::vector<double>(w.data(), w.data() + w.size())};
  const double residual = NormalEquationResidual(design, labels, reg, model);
  if (!(residual <= 1e-8)) {
    throw Error(ErrorKind::kSingular, "exact solve residual " + csv::FormatDouble(residual) +
                                          " exceeds 1e-8 (R-diagonal ratio " +
                                          csv::FormatDouble(condition) + ")");
  }
  return model;
}

inline LinearModel SolveExact(const LabeledPool& pool, const FairRegularizer& reg) {
  return SolveExact(AugmentedDesign(pool.points), LabelVector(pool), reg);
}

// Perceptron step plus the penalty -lambda (w.w~) w~, evaluated at the
// pre-update weights. The penalty applies on every round.
inline LinearModel RegularizedUpdate(const LinearModel& model, std::span<const double> x, int y,
                                     double eta, const FairRegularizer& reg) {
  Require(reg.lambda >= 0.0, ErrorKind::kOutOfRange, "lambda must be non-negative");
  Require(model.weights.size() == reg.num_features() + 1, ErrorKind::kDimensionMismatch,
          "regularizer has " + std::to_string(reg.num_features()) + " features, model " +
              std::to_string(model.num_features()));
  LinearModel next = PerceptronUpdate(model, x, y, eta);
  if (reg.lambda == 0.0) return next;
  double dot = 0.0;
  for (Eigen::Index k = 0; k < reg.w_reg.size(); ++k) {
    dot += model.weights[static_cast<std::size_t>(k) + 1] * reg.w_reg[k];
  }
  const double shrink = reg.lambda * dot;
  for (Eigen::Index k = 0; k < reg.w_reg.size(); ++k) {
    next.weights[static_cast<std::size_t>(k) + 1] -= shrink * reg.w_reg[k];
  }
  return next;
}

inline nlohmann::json RegularizerToJson(const FairRegularizer& reg) {
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::json sigma = nlohmann::json::array();
  for (Eigen::Index r = 0; r < reg.sigma_x.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(reg.sigma_x.cols()));
    for (Eigen::Index c = 0; c < reg.sigma_x.cols(); ++c) row[static_cast<std::size_t>(c)] = reg.sigma_x(r, c);
    sigma.push_back(row);
  }
  return nlohmann::json{{"w_a", vec(reg.w_a)},
                        {"sigma_x", sigma},
                        {"w_reg", vec(reg.w_reg)},
                        {"lambda", reg.lambda},
                        {"alpha_a", reg.alpha_a}};
}

inline FairRegularizer RegularizerFromJson(const nlohmann::json& j) {
  auto vec = [](const nlohmann::json& a) {
    const auto v = a.get<std::vector<double>>();
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  try {
    FairRegularizer reg;
    reg.w_a = vec(j.at("w_a"));
    reg.w_reg = vec(j.at("w_reg"));
    const auto& sigma = j.at("sigma_x");
    const auto m = reg.w_a.size();
    Require(reg.w_reg.size() == m && static_cast<Eigen::Index>(sigma.size()) == m, ErrorKind::kIo,
            "regularizer JSON has inconsistent dimensions");
    reg.sigma_x.resize(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
      const auto row = sigma.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
      Require(static_cast<Eigen::Index>(row.size()) == m, ErrorKind::kIo, "sigma_x must be square");
      for (Eigen::Index c = 0; c < m; ++c) reg.sigma_x(r, c) = row[static_cast<std::size_t>(c)];
    }
    reg.lambda = j.value("lambda", 0.0);
    reg.alpha_a = j.value("alpha_a", 1e-3);
    Require(reg.lambda >= 0.0, ErrorKind::kOutOfRange, "lambda must be non-negative");
    return reg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kIo, std::string("bad regularizer JSON: ") + e.what());
  }
}

}  // namespace fairsim

#endif  // FAIRSIM_FAIRREG_HPP_
