#include "nlpca/stiefel.hpp"

#include <string>

#include "nlpca/error.hpp"

namespace nlpca {
namespace {

double orthonormality_defect(const Matrix& m) {
  const Eigen::Index d = m.cols();
  return (m.transpose() * m - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

Vector uniform_on_sphere(Eigen::Index dim, Rng& rng) {
  for (;;) {
    Vector g = rng.normal_vector(dim);
    const double norm = g.norm();
    if (norm > 0.0) return g / norm;
  }
}

}  // namespace

StiefelPoint::StiefelPoint(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.cols() < 1 || entries_.rows() < entries_.cols()) {
    throw InvalidArgument("Stiefel frame needs p >= d >= 1, got " +
                          std::to_string(entries_.rows()) + "x" +
                          std::to_string(entries_.cols()));
  }
  if (!entries_.allFinite() || orthonormality_defect(entries_) > kFrameTolerance) {
    throw InvalidArgument("matrix columns are not orthonormal");
  }
}

StiefelPoint StiefelPoint::canonical(Eigen::Index p, Eigen::Index d) {
  return StiefelPoint(Matrix::Identity(p, d));
}

bool is_orthonormal(const Matrix& m, double tol) {
  if (m.cols() == 0 || !m.allFinite()) return false;
  return orthonormality_defect(m) <= tol;
}

SvdFactors thin_svd(const Matrix& m) {
  if (m.rows() < m.cols()) {
    throw InvalidArgument("thin_svd expects a tall matrix");
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Matrix null_space_basis(const Matrix& v_partial) {
  const Eigen::Index p = v_partial.rows();
  const Eigen::Index k = v_partial.cols();
  if (k >= p) {
    throw InvalidArgument("null_space_basis: frame already spans R^" + std::to_string(p));
  }
  if (k == 0) return Matrix::Identity(p, p);
  if (!is_orthonormal(v_partial, kDerivedTolerance)) {
    throw InvalidArgument("null_space_basis: input columns are not orthonormal");
  }
  Eigen::HouseholderQR<Matrix> qr(v_partial);
  Matrix q = qr.householderQ();
  return q.rightCols(p - k);
}

StiefelPoint sample_uniform_stiefel(Eigen::Index p, Eigen::Index d, Rng& rng) {
  if (d < 1 || d > p) {
    throw InvalidArgument("sample_uniform_stiefel: need 1 <= d <= p, got p=" +
                          std::to_string(p) + " d=" + std::to_string(d));
  }
  Matrix frame(p, d);
  frame.col(0) = uniform_on_sphere(p, rng);
  Vector embedded(p);
  for (Eigen::Index k = 1; k < d; ++k) {
    // Same basis as null_space_basis(frame.leftCols(k)), applied implicitly.
    Eigen::HouseholderQR<Matrix> qr(frame.leftCols(k));
    embedded.setZero();
    embedded.tail(p - k) = uniform_on_sphere(p - k, rng);
    frame.col(k) = qr.householderQ() * embedded;
  }
  return StiefelPoint(std::move(frame));
}

PolarProjection polar_project_checked(const Matrix& m) {
  if (m.cols() < 1 || m.rows() < m.cols()) {
    throw InvalidArgument("polar_project expects a p x d matrix with p >= d >= 1");
  }
  if (!m.allFinite()) throw NumericalError("polar_project: non-finite input");
  const SvdFactors f = thin_svd(m);
  const double largest = f.singular_values[0];
  const double smallest = f.singular_values[f.singular_values.size() - 1];
  const bool deficient = !(smallest > 1e-12 * largest);
  return {StiefelPoint(f.u * f.v.transpose()), deficient};
}

StiefelPoint polar_project(const Matrix& m) { return polar_project_checked(m).frame; }

}  // namespace nlpca
