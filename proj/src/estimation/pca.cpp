#include "airgan/estimation/pca.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

#include "airgan/core/error.hpp"

namespace airgan {

double PcaResult::explained_ratio(std::size_t k) const {
  if (k == 0) return 0.0;
  if (!(total_variance > 0.0)) return 1.0;
  const auto kk = std::min<long>(static_cast<long>(k), explained_variance.size());
  return explained_variance.head(kk).sum() / total_variance;
}

PcaResult fit_pca(const Eigen::MatrixXd& samples, double variance_fraction) {
  if (samples.rows() < 1 || samples.cols() < 1) throw PreconditionError("fit_pca: empty data");
  const auto n = static_cast<double>(samples.rows());

  PcaResult out;
  out.mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - out.mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / n;

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw DegenerateInputError("fit_pca: eigen-decomposition failed");
  // Eigen returns ascending eigenvalues.
  out.explained_variance = solver.eigenvalues().reverse().cwiseMax(0.0);
  out.components = solver.eigenvectors().rowwise().reverse();
  out.total_variance = out.explained_variance.sum();

  std::size_t k = 1;
  while (k < static_cast<std::size_t>(out.explained_variance.size()) &&
         out.explained_ratio(k) < variance_fraction) {
    ++k;
  }
  out.n_components = k;
  const auto basis = out.components.leftCols(static_cast<long>(k));
  out.reconstructions = (centered * basis * basis.transpose()).rowwise() + out.mean.transpose();
  return out;
}

}  // namespace airgan
