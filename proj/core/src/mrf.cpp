#include "nlpca/mrf.hpp"

#include <cmath>
#include <string>

#include "nlpca/error.hpp"

namespace nlpca {
namespace {

void require_sites(std::span<const StiefelPoint> transformations, const InteractionWeights& weights) {
  const auto n = static_cast<Eigen::Index>(transformations.size());
  if (weights.lambda.rows() != n || weights.lambda.cols() != n) {
    throw InvalidArgument("weight matrix is " + std::to_string(weights.lambda.rows()) + "x" +
                          std::to_string(weights.lambda.cols()) + " for " + std::to_string(n) +
                          " sites");
  }
  for (const auto& v : transformations) {
    if (v.ambient_dim() != transformations.front().ambient_dim() ||
        v.frame_dim() != transformations.front().frame_dim()) {
      throw InvalidArgument("transformations have inconsistent dimensions");
    }
  }
}

}  // namespace

InteractionWeights compute_weights(const Matrix& latents, double c_strength, double bandwidth) {
  if (!(c_strength > 0.0)) throw InvalidArgument("interaction strength c must be positive");
  if (!(bandwidth > 0.0)) throw InvalidArgument("kernel bandwidth w must be positive");
  if (bandwidth < kMinBandwidth) {
    throw InvalidArgument("kernel bandwidth w is below the 1e-8 floor");
  }
  const Eigen::Index n = latents.rows();
  if (n < 2) throw InvalidArgument("compute_weights needs at least two sites");

  InteractionWeights w{Matrix::Zero(n, n), c_strength, bandwidth};
  const double scale = 1.0 / (2.0 * bandwidth * bandwidth);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double sq = (latents.row(i) - latents.row(j)).squaredNorm();
      const double value = c_strength * std::exp(-sq * scale);
      w.lambda(i, j) = value;
      w.lambda(j, i) = value;
    }
  }
  return w;
}

double default_bandwidth(const Matrix& latents) {
  const Eigen::Index n = latents.rows();
  if (n < 2) throw InvalidArgument("default_bandwidth needs at least two latents");
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) total += (latents.row(i) - latents.row(j)).norm();
  }
  const double mean = total / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
  if (!(mean > 0.0)) throw InvalidArgument("all latents coincide; bandwidth would be zero");
  return mean;
}

double default_strength(Eigen::Index n) {
  if (n < 1) throw InvalidArgument("default_strength needs n >= 1");
  return 100.0 / static_cast<double>(n);
}

VmfParam conditional_param(Eigen::Index site, std::span<const StiefelPoint> transformations,
                           const InteractionWeights& weights) {
  const auto n = static_cast<Eigen::Index>(transformations.size());
  if (site < 0 || site >= n) {
    throw InvalidArgument("site index " + std::to_string(site) + " out of range [0, " +
                          std::to_string(n) + ")");
  }
  require_sites(transformations, weights);
  const StiefelPoint& own = transformations[static_cast<std::size_t>(site)];
  Matrix c = Matrix::Zero(own.ambient_dim(), own.frame_dim());
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != site) c += weights.lambda(site, j) * transformations[static_cast<std::size_t>(j)].matrix();
  }
  return VmfParam(std::move(c));
}

double mrf_log_density_unnorm(std::span<const StiefelPoint> transformations,
                              const InteractionWeights& weights) {
  require_sites(transformations, weights);
  const std::size_t n = transformations.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double lambda = weights.lambda(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (lambda == 0.0) continue;
      total += lambda * transformations[i].matrix().cwiseProduct(transformations[j].matrix()).sum();
    }
  }
  return total;
}

}  // namespace nlpca
