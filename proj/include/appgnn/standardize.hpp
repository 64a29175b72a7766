// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace appgnn {

/// Per-column z-score statistics, fitted on the training split only and
/// reused everywhere else.
struct StandardizerStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd std; // population standard deviation

  int dim() const { return static_cast<int>(mean.size()); }
};

StandardizerStats fit_standardizer(const std::vector<Eigen::MatrixXd>& matrices);

/// (x - mean) / std per column; columns with std < 1e-12 map to 0.
Eigen::MatrixXd apply_standardizer(const StandardizerStats& stats, const Eigen::MatrixXd& X);

} // namespace appgnn
