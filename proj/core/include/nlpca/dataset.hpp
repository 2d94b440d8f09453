#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nlpca/random.hpp"
#include "nlpca/types.hpp"

namespace nlpca {

/// Centered n×p observations. `column_means` restores the raw frame.
struct Dataset {
  Matrix y;
  Vector column_means;
  std::optional<std::vector<int>> labels;

  Eigen::Index n() const { return y.rows(); }
  Eigen::Index p() const { return y.cols(); }
  Matrix decentered(const Matrix& centered) const;
};

Dataset center(const Matrix& raw);

struct SphereSample {
  Matrix raw;  // uncentered, generating sphere at the origin
  Dataset data;
};

/// n points uniform on the unit sphere in R³ plus isotropic Gaussian noise.
SphereSample generate_sphere(Eigen::Index n, double noise_sigma, Rng& rng);

/// Grayscale images stored row-major, one image per row of `pixels`.
struct RawImageSet {
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> pixels;
  int rows = 0;
  int cols = 0;
  std::vector<int> labels;

  Eigen::Index count() const { return pixels.rows(); }
};

enum class Pooling { kStride, kMean };

/// Reduces each image by `factor` along both axes. Stride keeps pixel
/// (factor·r, factor·c); mean averages each factor×factor block.
RawImageSet subsample_images(const RawImageSet& set, int factor, Pooling pooling = Pooling::kStride);

/// `per_class` images of each listed class, chosen uniformly without
/// replacement; the combined selection is then shuffled.
RawImageSet select_digit_subset(const RawImageSet& set, const std::vector<int>& classes,
                                int per_class, Rng& rng);

/// Flattens to p = rows·cols, rescales to [0,1] and centers. Labels carry over.
Dataset to_dataset(const RawImageSet& set);

}  // namespace nlpca
