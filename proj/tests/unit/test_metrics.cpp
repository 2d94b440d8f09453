#include <doctest.h>

#include <cmath>

#include "nlpca/error.hpp"
#include "nlpca/metrics.hpp"
#include "oracles.hpp"

using nlpca::Matrix;
using nlpca::Vector;

namespace {

int brute_mismatch(const Matrix& x, const std::vector<int>& labels) {
  int count = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index best = -1;
    double best_d = INFINITY;
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
      if (j == i) continue;
      double sq = 0.0;
      for (Eigen::Index k = 0; k < x.cols(); ++k) sq += (x(i, k) - x(j, k)) * (x(i, k) - x(j, k));
      if (sq < best_d) {
        best_d = sq;
        best = j;
      }
    }
    count += labels[static_cast<std::size_t>(best)] != labels[static_cast<std::size_t>(i)];
  }
  return count;
}

}  // namespace

TEST_CASE("reconstruction_errors") {
  const Matrix y = Matrix::Random(4, 3);
  CHECK(nlpca::reconstruction_errors(y, y).isZero());
  Matrix a(1, 2), b(1, 2);
  a << 3, 4;
  b << 0, 0;
  CHECK(nlpca::reconstruction_errors(a, b)(0) == 5.0);
  oracle::Gen gen(1);
  const Matrix u = gen.gaussian(20, 5), v = gen.gaussian(20, 5);
  const Vector e = nlpca::reconstruction_errors(u, v);
  for (int i = 0; i < 20; ++i) {
    double sq = 0.0;
    for (int k = 0; k < 5; ++k) sq += (u(i, k) - v(i, k)) * (u(i, k) - v(i, k));
    CHECK(std::abs(e(i) - std::sqrt(sq)) < 1e-12);
  }
  CHECK_THROWS_AS(nlpca::reconstruction_errors(u, v.leftCols(4)), nlpca::InvalidArgument);
}

TEST_CASE("distance_to_unit_sphere") {
  Matrix pts(2, 3);
  pts << 0, 1, 0, 3, 0, 0;
  const Vector d = nlpca::distance_to_unit_sphere(pts, Vector::Zero(3));
  CHECK(d(0) == 0.0);
  CHECK(d(1) == 2.0);
  Vector center(3);
  center << 1, 1, 1;
  Matrix shifted = pts.rowwise() - center.transpose();
  CHECK(nlpca::distance_to_unit_sphere(shifted, -center).isApprox(d));
  CHECK_THROWS_AS(nlpca::distance_to_unit_sphere(Matrix::Zero(2, 2), Vector::Zero(2)),
                  nlpca::InvalidArgument);
}

TEST_CASE("nn_mismatch_count") {
  Matrix two(2, 1);
  two << 0, 1;
  CHECK(nlpca::nn_mismatch_count(two, {1, 1}) == 0);
  CHECK(nlpca::nn_mismatch_count(two, {1, 2}) == 2);

  // Point 1 is equidistant from 0 and 2; the lower index wins.
  Matrix tie(3, 1);
  tie << 0, 1, 2;
  CHECK(nlpca::nn_mismatch_count(tie, {5, 5, 6}) == 0 + 0 + 1);

  CHECK_THROWS_AS(nlpca::nn_mismatch_count(two, {1}), nlpca::InvalidArgument);
  CHECK_THROWS_AS(nlpca::nn_mismatch_count(Matrix::Zero(1, 2), {1}), nlpca::InvalidArgument);
}

TEST_CASE("nn_mismatch_count matches brute force and ignores rigid motions") {
  oracle::Gen gen(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = gen.integer(2, 40);
    const int d = gen.integer(1, 4);
    const Matrix x = gen.gaussian(n, d);
    std::vector<int> labels;
    for (int i = 0; i < n; ++i) labels.push_back(gen.integer(0, 2));
    const int count = nlpca::nn_mismatch_count(x, labels);
    CHECK(count == brute_mismatch(x, labels));
    const Matrix q = gen.orthonormal(d, d);
    const Eigen::RowVectorXd shift = gen.gaussian(1, d, 10.0);
    const Matrix moved = (x * q).rowwise() + shift;
    CHECK(nlpca::nn_mismatch_count(moved, labels) == count);
  }
}

TEST_CASE("histogram") {
  SUBCASE("constant values fill one bin") {
    const auto h = nlpca::histogram(Vector::Constant(5, 2.5), 4);
    long occupied = 0, total = 0;
    for (long c : h.counts) {
      occupied += c > 0;
      total += c;
    }
    CHECK(occupied == 1);
    CHECK(total == 5);
  }
  SUBCASE("three points in two bins") {
    Vector v(3);
    v << 0, 0.5, 1;
    const auto h = nlpca::histogram(v, 2);
    CHECK(h.counts == std::vector<long>{2, 1});
    CHECK(h.bin_edges == std::vector<double>{0.0, 0.5, 1.0});
  }
  SUBCASE("counts are conserved") {
    oracle::Gen gen(3);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = gen.integer(1, 300);
      const int bins = gen.integer(1, 40);
      const Vector v = gen.gaussian(n, 1, gen.uniform(1e-3, 1e3)).col(0);
      const auto h = nlpca::histogram(v, bins);
      REQUIRE(h.counts.size() == static_cast<std::size_t>(bins));
      REQUIRE(h.bin_edges.size() == static_cast<std::size_t>(bins + 1));
      long total = 0;
      for (long c : h.counts) {
        CHECK(c >= 0);
        total += c;
      }
      CHECK(total == n);
      CHECK(std::is_sorted(h.bin_edges.begin(), h.bin_edges.end()));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(nlpca::histogram(Vector(0), 3), nlpca::InvalidArgument);
    CHECK_THROWS_AS(nlpca::histogram(Vector::Ones(3), 0), nlpca::InvalidArgument);
  }
}
