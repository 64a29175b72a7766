// SPDX-License-Identifier: Apache-2.0
#include "appgnn/standardize.hpp"

#include <cmath>

#include "appgnn/error.hpp"

namespace appgnn {

namespace {
constexpr double kStdEps = 1e-12;
}

StandardizerStats fit_standardizer(const std::vector<Eigen::MatrixXd>& matrices) {
  long rows = 0;
  for (const auto& m : matrices) rows += m.rows();
  if (matrices.empty() || rows == 0) throw Error("fit_standardizer: empty fitting set");
  const long d = matrices.front().cols();

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(d);
  for (const auto& m : matrices) {
    if (m.cols() != d) throw Error("fit_standardizer: column count mismatch");
    sum += m.colwise().sum().transpose();
    sumsq += m.array().square().matrix().colwise().sum().transpose();
  }
  StandardizerStats s;
  s.mean = sum / static_cast<double>(rows);
  Eigen::VectorXd var = sumsq / static_cast<double>(rows) - s.mean.array().square().matrix();
  s.std = var.array().max(0.0).sqrt();
  return s;
}

Eigen::MatrixXd apply_standardizer(const StandardizerStats& stats, const Eigen::MatrixXd& X) {
  if (X.cols() != stats.dim()) throw Error("apply_standardizer: dimension mismatch");
  Eigen::MatrixXd Z(X.rows(), X.cols());
  for (int c = 0; c < X.cols(); ++c) {
    if (stats.std(c) < kStdEps) {
      Z.col(c).setZero();
    } else {
      Z.col(c) = (X.col(c).array() - stats.mean(c)) / stats.std(c);
    }
  }
  return Z;
}

} // namespace appgnn
