#include <doctest.h>

#include <cmath>

#include "nlpca/error.hpp"
#include "nlpca/pca.hpp"
#include "oracles.hpp"

using nlpca::Matrix;

namespace {

double projection_error(const Matrix& y, const Matrix& v) {
  return (y - y * v * v.transpose()).squaredNorm();
}

}  // namespace

TEST_CASE("center") {
  Matrix centered(2, 2);
  centered << 1, -2, -1, 2;
  const auto same = nlpca::center(centered);
  CHECK(same.y == centered);
  CHECK(same.column_means.isZero());

  Matrix constant(3, 2);
  constant << 5, 1, 5, 2, 5, 3;
  const auto c = nlpca::center(constant);
  CHECK(c.y.col(0).isZero());
  CHECK(c.column_means(0) == 5.0);

  oracle::Gen gen(1);
  const Matrix raw = gen.gaussian(10, 3, 4.0).array() + 7.0;
  const auto d = nlpca::center(raw);
  CHECK(d.y.colwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((d.decentered(d.y) - raw).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(nlpca::center(Matrix(0, 3)), nlpca::InvalidArgument);
}

TEST_CASE("pca_fit examples") {
  Matrix on_axis(4, 2);
  on_axis << -3, 0, -1, 0, 1, 0, 3, 0;
  const auto fit = nlpca::pca_fit(nlpca::center(on_axis), 1);
  CHECK(std::abs(std::abs(fit.loadings.matrix()(0, 0)) - 1.0) < 1e-12);

  oracle::Gen gen(2);
  const auto data = nlpca::center(gen.gaussian(6, 4));
  const auto full = nlpca::pca_fit(data, 4);
  CHECK((nlpca::reconstruct_linear(full) - data.y).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(nlpca::pca_fit(data, 0), nlpca::InvalidArgument);
  CHECK_THROWS_AS(nlpca::pca_fit(data, 5), nlpca::InvalidArgument);
  CHECK_THROWS_AS(nlpca::pca_fit(nlpca::center(gen.gaussian(3, 5)), 4), nlpca::InvalidArgument);
}

TEST_CASE("pca_fit beats random projections") {
  oracle::Gen gen(3);
  const auto data = nlpca::center(gen.gaussian(20, 5));
  const auto fit = nlpca::pca_fit(data, 2);
  const double best = projection_error(data.y, fit.loadings.matrix());
  for (int i = 0; i < 10000; ++i) {
    REQUIRE(best <= projection_error(data.y, gen.orthonormal(5, 2)) + 1e-12);
  }
}

TEST_CASE("pca_fit structure on random data") {
  oracle::Gen gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = gen.integer(2, 15);
    const int p = gen.integer(1, 8);
    const auto data = nlpca::center(gen.gaussian(n, p, gen.uniform(0.1, 10.0)));
    double previous = INFINITY;
    for (int d = 1; d <= std::min(n, p); ++d) {
      const auto fit = nlpca::pca_fit(data, d);
      const Matrix& v = fit.loadings.matrix();
      CHECK(oracle::max_abs_gram_defect(v) < 1e-10);
      CHECK(fit.latents == data.y * v);
      for (int k = 1; k < d; ++k) CHECK(fit.singular_values(k - 1) >= fit.singular_values(k));
      for (int k = 0; k < d; ++k) {
        Eigen::Index arg;
        v.col(k).cwiseAbs().maxCoeff(&arg);
        CHECK(v(arg, k) > 0.0);
      }
      const double err = projection_error(data.y, v);
      CHECK(err <= previous + 1e-10);
      previous = err;
      // Residual orthogonal to the loadings.
      CHECK(((data.y - nlpca::reconstruct_linear(fit)) * v).cwiseAbs().maxCoeff() < 1e-8);
    }
    CHECK(nlpca::pilot_tau2(data, std::min(n, p)) <= 1e-10);
  }
}

TEST_CASE("ppca_ml_loading") {
  // Isotropic cloud in R² (equal singular values).
  Matrix iso(4, 2);
  iso << 1, 0, -1, 0, 0, 1, 0, -1;
  const auto data = nlpca::center(iso);
  const double s = std::sqrt(0.5);  // singular values of Y/√n
  CHECK(nlpca::ppca_ml_loading(data, 1).col(0).norm() == doctest::Approx(s));

  oracle::Gen gen(5);
  const auto random = nlpca::center(gen.gaussian(12, 5));
  const Matrix w = nlpca::ppca_ml_loading(random, 3);
  const auto fit = nlpca::pca_fit(random, 3);
  const Matrix expected = fit.singular_values.array().square().matrix().asDiagonal();
  CHECK((w.transpose() * w - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("pilot_tau2 follows Eckart-Young") {
  oracle::Gen gen(6);
  const auto data = nlpca::center(gen.gaussian(30, 6));
  const int n = 30;
  const int p = 6;
  const Eigen::VectorXd s =
      Eigen::JacobiSVD<Matrix>(data.y / std::sqrt(static_cast<double>(n))).singularValues();
  for (int d = 1; d <= p; ++d) {
    double tail = 0.0;
    for (int k = d; k < p; ++k) tail += s(k) * s(k);
    CHECK(nlpca::pilot_tau2(data, d) == doctest::Approx(tail / p).epsilon(1e-10).scale(1e-12));
    CHECK(nlpca::pilot_tau2(data, d) >= 0.0);
  }
}

TEST_CASE("avg_variance") {
  CHECK(nlpca::avg_variance(nlpca::center(Matrix::Zero(4, 3))) == 0.0);
  Matrix pm(2, 1);
  pm << -1, 1;
  CHECK(nlpca::avg_variance(nlpca::center(pm)) == 2.0);

  oracle::Gen gen(7);
  const Matrix raw = gen.gaussian(25, 4, 3.0);
  double expected = 0.0;
  for (int j = 0; j < 4; ++j) {
    double mean = 0.0;
    for (int i = 0; i < 25; ++i) mean += raw(i, j);
    mean /= 25.0;
    double ss = 0.0;
    for (int i = 0; i < 25; ++i) ss += (raw(i, j) - mean) * (raw(i, j) - mean);
    expected += ss / 24.0;
  }
  expected /= 4.0;
  CHECK(std::abs(nlpca::avg_variance(nlpca::center(raw)) - expected) < 1e-12);
  CHECK_THROWS_AS(nlpca::avg_variance(nlpca::center(Matrix::Ones(1, 3))), nlpca::InvalidArgument);
}
