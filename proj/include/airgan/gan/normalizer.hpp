#pragma once

#include <Eigen/Dense>

namespace airgan::gan {

/// Per-dimension affine map of the training range onto [0, 1].
class MinMaxNormalizer {
 public:
  MinMaxNormalizer() = default;
  MinMaxNormalizer(Eigen::VectorXd min, Eigen::VectorXd max);

  /// Fits to the rows of `data`; throws PreconditionError on empty or
  /// non-finite data.
  static MinMaxNormalizer fit(const Eigen::MatrixXd& data);

  Eigen::Index dim() const noexcept { return min_.size(); }
  const Eigen::VectorXd& min() const noexcept { return min_; }
  const Eigen::VectorXd& max() const noexcept { return max_; }
  bool constant(Eigen::Index i) const { return max_(i) == min_(i); }

  /// Constant dimensions map to 0 and back to their constant.
  Eigen::MatrixXd normalize(const Eigen::MatrixXd& rows) const;
  Eigen::MatrixXd denormalize(const Eigen::MatrixXd& rows) const;

 private:
  Eigen::VectorXd min_;
  Eigen::VectorXd max_;
};

}  // namespace airgan::gan
