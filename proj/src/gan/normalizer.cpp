#include "airgan/gan/normalizer.hpp"

#include "airgan/core/error.hpp"

namespace airgan::gan {

MinMaxNormalizer::MinMaxNormalizer(Eigen::VectorXd min, Eigen::VectorXd max)
    : min_(std::move(min)), max_(std::move(max)) {
  if (min_.size() != max_.size()) throw PreconditionError("normaliser: min/max sizes differ");
  for (Eigen::Index i = 0; i < min_.size(); ++i) {
    if (!(max_(i) >= min_(i))) throw PreconditionError("normaliser: max below min");
  }
}

MinMaxNormalizer MinMaxNormalizer::fit(const Eigen::MatrixXd& data) {
  if (data.rows() == 0 || data.cols() == 0) throw PreconditionError("normaliser: empty data");
  if (!data.allFinite()) throw PreconditionError("normaliser: non-finite training data");
  return {data.colwise().minCoeff().transpose(), data.colwise().maxCoeff().transpose()};
}

Eigen::MatrixXd MinMaxNormalizer::normalize(const Eigen::MatrixXd& rows) const {
  if (rows.cols() != dim()) throw PreconditionError("normaliser: width mismatch");
  Eigen::MatrixXd out(rows.rows(), rows.cols());
  for (Eigen::Index c = 0; c < dim(); ++c) {
    const double range = max_(c) - min_(c);
    if (range > 0.0) {
      out.col(c) = (rows.col(c).array() - min_(c)) / range;
    } else {
      out.col(c).setZero();
    }
  }
  return out;
}

Eigen::MatrixXd MinMaxNormalizer::denormalize(const Eigen::MatrixXd& rows) const {
  if (rows.cols() != dim()) throw PreconditionError("normaliser: width mismatch");
  Eigen::MatrixXd out(rows.rows(), rows.cols());
  for (Eigen::Index c = 0; c < dim(); ++c) {
    const double range = max_(c) - min_(c);
    if (range > 0.0) {
      out.col(c) = rows.col(c).array() * range + min_(c);
    } else {
      out.col(c).setConstant(min_(c));
    }
  }
  return out;
}

}  // namespace airgan::gan
