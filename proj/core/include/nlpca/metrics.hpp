#pragma once

#include <vector>

#include "nlpca/types.hpp"

namespace nlpca {

/// Per-row Euclidean norms of y - y_hat.
Vector reconstruction_errors(const Matrix& y, const Matrix& y_hat);

/// |‖point - center‖ - 1| per row of an n×3 matrix.
Vector distance_to_unit_sphere(const Matrix& points, const Vector& center);

/// Number of points whose Euclidean nearest neighbour (ties to the lowest
/// index) carries a different label.
int nn_mismatch_count(const Matrix& latents, const std::vector<int>& labels);

struct HistogramSpec {
  std::vector<double> bin_edges;  // ascending, size = counts.size() + 1
  std::vector<long> counts;
};

/// Equal-width bins over [min, max]. Bins are right-closed (lo, hi]; the
/// first bin also takes min.
HistogramSpec histogram(const Vector& values, int n_bins);

}  // namespace nlpca
