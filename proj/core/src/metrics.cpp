#include "nlpca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlpca/error.hpp"

namespace nlpca {

Vector reconstruction_errors(const Matrix& y, const Matrix& y_hat) {
  if (y.rows() != y_hat.rows() || y.cols() != y_hat.cols()) {
    throw InvalidArgument("reconstruction_errors: shape mismatch");
  }
  return (y - y_hat).rowwise().norm();
}

Vector distance_to_unit_sphere(const Matrix& points, const Vector& center) {
  if (points.cols() != 3 || center.size() != 3) {
    throw InvalidArgument("distance_to_unit_sphere expects 3-column points and a 3-vector center");
  }
  return ((points.rowwise() - center.transpose()).rowwise().norm().array() - 1.0).abs().matrix();
}

int nn_mismatch_count(const Matrix& latents, const std::vector<int>& labels) {
  const Eigen::Index n = latents.rows();
  if (n < 2) throw InvalidArgument("nn_mismatch_count needs at least two points");
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw InvalidArgument("nn_mismatch_count: " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(n) + " points");
  }
  int mismatches = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index nearest = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dist = (latents.row(i) - latents.row(j)).squaredNorm();
      if (dist < best) {
        best = dist;
        nearest = j;
      }
    }
    if (labels[static_cast<std::size_t>(nearest)] != labels[static_cast<std::size_t>(i)]) ++mismatches;
  }
  return mismatches;
}

HistogramSpec histogram(const Vector& values, int n_bins) {
  if (values.size() == 0) throw InvalidArgument("histogram of an empty sample");
  if (n_bins < 1) throw InvalidArgument("histogram needs at least one bin");
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  const double width = (hi - lo) / n_bins;

  HistogramSpec h;
  h.counts.assign(static_cast<std::size_t>(n_bins), 0);
  for (int b = 0; b <= n_bins; ++b) h.bin_edges.push_back(b == n_bins ? hi : lo + b * width);
  for (double v : values) {
    int bin = width > 0.0 ? static_cast<int>(std::ceil((v - lo) / width)) - 1 : 0;
    bin = std::clamp(bin, 0, n_bins - 1);
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  return h;
}

}  // namespace nlpca
