#pragma once

#include <Eigen/Dense>

namespace airgan {

struct PcaResult {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;          ///< columns, sorted by decreasing variance
  Eigen::VectorXd explained_variance;  ///< per component, population convention
  double total_variance = 0.0;
  std::size_t n_components = 0;        ///< components kept
  Eigen::MatrixXd reconstructions;     ///< one row per sample, from the kept components

  /// Fraction of total variance explained by the first k components (1 when
  /// the data has no variance and k >= 1).
  double explained_ratio(std::size_t k) const;
};

/// PCA over the rows of `samples`, keeping the smallest number of
/// components (at least one) whose explained-variance ratio reaches
/// `variance_fraction`.
PcaResult fit_pca(const Eigen::MatrixXd& samples, double variance_fraction);

}  // namespace airgan
