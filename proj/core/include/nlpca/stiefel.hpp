#pragma once

#include "nlpca/random.hpp"
#include "nlpca/types.hpp"

namespace nlpca {

/// A p×d real matrix with orthonormal columns, p ≥ d ≥ 1.
///
/// Construction checks XᵀX = I_d to within `kFrameTolerance` and throws
/// `InvalidArgument` otherwise, so every live instance is a valid point of
/// the Stiefel manifold.
class StiefelPoint {
 public:
  explicit StiefelPoint(Matrix entries);

  /// The p×d frame whose columns are the first d standard basis vectors.
  static StiefelPoint canonical(Eigen::Index p, Eigen::Index d);

  const Matrix& matrix() const { return entries_; }
  Eigen::Index ambient_dim() const { return entries_.rows(); }
  Eigen::Index frame_dim() const { return entries_.cols(); }

  friend bool operator==(const StiefelPoint&, const StiefelPoint&) = default;

 private:
  Matrix entries_;
};

struct SvdFactors {
  Matrix u;                // p×d
  Vector singular_values;  // descending
  Matrix v;                // d×d
};

bool is_orthonormal(const Matrix& m, double tol);

/// Thin SVD of a p×d matrix with p ≥ d.
SvdFactors thin_svd(const Matrix& m);

/// Orthonormal basis of the orthogonal complement of span(v_partial).
///
/// Trailing columns of the full Householder Q of `v_partial`. Requires k < p
/// and orthonormal input at `kDerivedTolerance`.
Matrix null_space_basis(const Matrix& v_partial);

/// Draws from the uniform measure on the Stiefel manifold by the column
/// recursion: v_1 uniform on S^{p-1}, then each v_k uniform on the unit
/// sphere of the complement of v_1..v_{k-1}.
StiefelPoint sample_uniform_stiefel(Eigen::Index p, Eigen::Index d, Rng& rng);

struct PolarProjection {
  StiefelPoint frame;
  bool rank_deficient = false;
};

/// U·Vᵀ from the thin SVD of m: the maximizer of tr(mᵀX) over Stiefel X.
///
/// A rank-deficient m has no unique maximizer. The completion taken from the
/// SVD factors is returned with `rank_deficient` set instead of failing.
PolarProjection polar_project_checked(const Matrix& m);
StiefelPoint polar_project(const Matrix& m);

}  // namespace nlpca
