#include "nlpca/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "nlpca/error.hpp"

namespace nlpca {

Matrix Dataset::decentered(const Matrix& centered) const {
  return centered.rowwise() + column_means.transpose();
}

Dataset center(const Matrix& raw) {
  if (raw.rows() < 1 || raw.cols() < 1) throw InvalidArgument("cannot center an empty matrix");
  Dataset out;
  out.column_means = raw.colwise().mean().transpose();
  out.y = raw.rowwise() - out.column_means.transpose();
  return out;
}

SphereSample generate_sphere(Eigen::Index n, double noise_sigma, Rng& rng) {
  if (n < 1) throw InvalidArgument("generate_sphere needs n >= 1");
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise level must be nonnegative");
  Matrix raw(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector g;
    do {
      g = rng.normal_vector(3);
    } while (g.norm() == 0.0);
    raw.row(i) = (g / g.norm()).transpose();
  }
  if (noise_sigma > 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < 3; ++k) raw(i, k) += noise_sigma * rng.normal();
    }
  }
  return {raw, center(raw)};
}

RawImageSet subsample_images(const RawImageSet& set, int factor, Pooling pooling) {
  if (factor < 1 || set.rows % factor != 0 || set.cols % factor != 0) {
    throw InvalidArgument("subsample factor " + std::to_string(factor) + " does not divide " +
                          std::to_string(set.rows) + "x" + std::to_string(set.cols));
  }
  RawImageSet out;
  out.rows = set.rows / factor;
  out.cols = set.cols / factor;
  out.labels = set.labels;
  out.pixels.resize(set.count(), out.rows * out.cols);
  for (Eigen::Index img = 0; img < set.count(); ++img) {
    for (int r = 0; r < out.rows; ++r) {
      for (int c = 0; c < out.cols; ++c) {
        std::uint8_t value = 0;
        if (pooling == Pooling::kStride) {
          value = set.pixels(img, (factor * r) * set.cols + factor * c);
        } else {
          int sum = 0;
          for (int dr = 0; dr < factor; ++dr) {
            for (int dc = 0; dc < factor; ++dc) {
              sum += set.pixels(img, (factor * r + dr) * set.cols + factor * c + dc);
            }
          }
          const int cells = factor * factor;
          value = static_cast<std::uint8_t>((sum + cells / 2) / cells);
        }
        out.pixels(img, r * out.cols + c) = value;
      }
    }
  }
  return out;
}

RawImageSet select_digit_subset(const RawImageSet& set, const std::vector<int>& classes,
                                int per_class, Rng& rng) {
  if (per_class < 0) throw InvalidArgument("per_class must be nonnegative");
  if (set.labels.size() != static_cast<std::size_t>(set.count())) {
    throw InvalidArgument("image set has " + std::to_string(set.count()) + " images but " +
                          std::to_string(set.labels.size()) + " labels");
  }
  auto draw_index = [&rng](std::size_t bound) {
    return static_cast<std::size_t>(rng.uniform() * static_cast<double>(bound));
  };

  std::vector<Eigen::Index> chosen;
  for (int cls : classes) {
    std::vector<Eigen::Index> pool;
    for (Eigen::Index i = 0; i < set.count(); ++i) {
      if (set.labels[static_cast<std::size_t>(i)] == cls) pool.push_back(i);
    }
    if (pool.size() < static_cast<std::size_t>(per_class)) {
      throw InvalidArgument("class " + std::to_string(cls) + " has only " +
                            std::to_string(pool.size()) + " images, need " +
                            std::to_string(per_class));
    }
    // Partial Fisher-Yates: the first per_class slots become the sample.
    for (std::size_t k = 0; k < static_cast<std::size_t>(per_class); ++k) {
      std::swap(pool[k], pool[k + draw_index(pool.size() - k)]);
    }
    std::sort(pool.begin(), pool.begin() + per_class);
    chosen.insert(chosen.end(), pool.begin(), pool.begin() + per_class);
  }
  for (std::size_t k = chosen.size(); k > 1; --k) {
    std::swap(chosen[k - 1], chosen[draw_index(k)]);
  }

  RawImageSet out;
  out.rows = set.rows;
  out.cols = set.cols;
  out.pixels.resize(static_cast<Eigen::Index>(chosen.size()), set.pixels.cols());
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    out.pixels.row(static_cast<Eigen::Index>(k)) = set.pixels.row(chosen[k]);
    out.labels.push_back(set.labels[static_cast<std::size_t>(chosen[k])]);
  }
  return out;
}

Dataset to_dataset(const RawImageSet& set) {
  if (set.count() < 1) throw InvalidArgument("cannot build a dataset from zero images");
  Matrix raw = set.pixels.cast<double>() / 255.0;
  Dataset out = center(raw);
  if (!set.labels.empty()) out.labels = set.labels;
  return out;
}

}  // namespace nlpca
