#include "nlpca/pca.hpp"

#include <cmath>
#include <string>

#include "nlpca/error.hpp"

namespace nlpca {
namespace {

void require_rank(const Dataset& data, Eigen::Index d) {
  const Eigen::Index limit = std::min(data.n(), data.p());
  if (d < 1 || d > limit) {
    throw InvalidArgument("latent dimension " + std::to_string(d) + " outside [1, " +
                          std::to_string(limit) + "]");
  }
}

}  // namespace

PcaFit pca_fit(const Dataset& data, Eigen::Index d) {
  require_rank(data, d);
  const Matrix scaled = data.y / std::sqrt(static_cast<double>(data.n()));
  Eigen::BDCSVD<Matrix> svd(scaled, Eigen::ComputeThinV);
  Matrix v = svd.matrixV().leftCols(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::Index arg = 0;
    v.col(k).cwiseAbs().maxCoeff(&arg);
    if (v(arg, k) < 0.0) v.col(k) = -v.col(k);
  }
  Matrix latents = data.y * v;
  return {StiefelPoint(std::move(v)), svd.singularValues().head(d), std::move(latents)};
}

Matrix ppca_ml_loading(const Dataset& data, Eigen::Index d) {
  const PcaFit fit = pca_fit(data, d);
  return fit.loadings.matrix() * fit.singular_values.asDiagonal();
}

Matrix reconstruct_linear(const PcaFit& fit) {
  return fit.latents * fit.loadings.matrix().transpose();
}

double pilot_tau2(const Dataset& data, Eigen::Index d) {
  const PcaFit fit = pca_fit(data, d);
  const double residual = (data.y - reconstruct_linear(fit)).squaredNorm();
  return residual / (static_cast<double>(data.n()) * static_cast<double>(data.p()));
}

double avg_variance(const Dataset& data) {
  if (data.n() < 2) throw InvalidArgument("sample variance needs n >= 2");
  const Eigen::RowVectorXd means = data.y.colwise().mean();
  const Matrix deviations = data.y.rowwise() - means;
  const double denom = static_cast<double>(data.n() - 1) * static_cast<double>(data.p());
  return deviations.squaredNorm() / denom;
}

}  // namespace nlpca
