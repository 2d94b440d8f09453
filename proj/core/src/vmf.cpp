#include "nlpca/vmf.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nlpca/error.hpp"

namespace nlpca {
namespace {

void require_same_shape(const StiefelPoint& x, const VmfParam& c, const char* where) {
  if (x.ambient_dim() != c.ambient_dim() || x.frame_dim() != c.frame_dim()) {
    throw InvalidArgument(std::string(where) + ": frame is " +
                          std::to_string(x.ambient_dim()) + "x" + std::to_string(x.frame_dim()) +
                          " but C is " + std::to_string(c.ambient_dim()) + "x" +
                          std::to_string(c.frame_dim()));
  }
}

Vector uniform_on_sphere(Eigen::Index dim, Rng& rng) {
  for (;;) {
    Vector g = rng.normal_vector(dim);
    const double norm = g.norm();
    if (norm > 0.0) return g / norm;
  }
}

// Cosine t = μᵀx for x ~ vMF(μ, κ) on S^{m-1}, returned as the pair
// (1 - t, sqrt(1 - t²)) so that tight concentrations keep full precision.
struct Cosine {
  double one_minus_t;
  double sine;
};

Cosine sample_cosine(Eigen::Index dim, double kappa, Rng& rng) {
  const double m1 = static_cast<double>(dim - 1);
  // b = (-2κ + sqrt(4κ² + (m-1)²)) / (m-1), rationalized.
  const double b = m1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + m1 * m1));
  const double one_minus_x0 = 2.0 * b / (1.0 + b);
  const double half = 0.5 * m1;
  for (;;) {
    const double z = rng.beta(half, half);
    const double denom = 1.0 - (1.0 - b) * z;
    const double one_minus_w = 2.0 * b * z / denom;
    // κ(w - x0) + (m-1)·log((1 - x0·w) / (1 - x0²)), the log acceptance ratio.
    const double log_ratio =
        kappa * (one_minus_x0 - one_minus_w) + m1 * std::log((1.0 + b) / (2.0 * denom));
    const double u = rng.uniform();
    if (u > 0.0 && std::log(u) <= log_ratio) {
      const double sine = 2.0 * std::sqrt(b * z * (1.0 - z)) / denom;
      return {one_minus_w, sine};
    }
  }
}

}  // namespace

VmfParam::VmfParam(Matrix c_matrix) : c_(std::move(c_matrix)) {
  if (c_.cols() < 1 || c_.rows() < c_.cols()) {
    throw InvalidArgument("vMF parameter must be p x d with p >= d >= 1");
  }
  if (!c_.allFinite()) throw InvalidArgument("vMF parameter has non-finite entries");
}

double vmf_log_density_unnorm(const StiefelPoint& x, const VmfParam& c) {
  require_same_shape(x, c, "vmf_log_density_unnorm");
  return c.matrix().cwiseProduct(x.matrix()).sum();
}

StiefelPoint vmf_mode(const VmfParam& c) { return polar_project(c.matrix()); }

RejectionResult vmf_sample_rejection(const VmfParam& c, Rng& rng, int max_attempts) {
  if (max_attempts < 1) throw InvalidArgument("max_attempts must be >= 1");
  const double envelope = thin_svd(c.matrix()).singular_values.sum();
  RejectionResult result;
  while (result.attempts < max_attempts) {
    ++result.attempts;
    StiefelPoint proposal = sample_uniform_stiefel(c.ambient_dim(), c.frame_dim(), rng);
    const double log_accept = vmf_log_density_unnorm(proposal, c) - envelope;
    const double u = rng.uniform();
    if (u < std::exp(std::min(log_accept, 0.0))) {
      result.sample.emplace(std::move(proposal));
      break;
    }
  }
  return result;
}

Vector vmf_sample_vector(const Vector& direction, double kappa, Rng& rng) {
  const Eigen::Index dim = direction.size();
  if (dim < 2) throw InvalidArgument("vmf_sample_vector needs dimension >= 2");
  if (std::abs(direction.norm() - 1.0) > kFrameTolerance) {
    throw InvalidArgument("vmf_sample_vector: direction is not a unit vector");
  }
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw InvalidArgument("vmf_sample_vector: kappa must be finite and nonnegative");
  }
  if (kappa == 0.0) return uniform_on_sphere(dim, rng);

  const Cosine cosine = sample_cosine(dim, kappa, rng);
  Vector tangent;
  for (;;) {
    tangent = rng.normal_vector(dim);
    tangent -= direction.dot(tangent) * direction;
    const double norm = tangent.norm();
    if (norm > 0.0) {
      tangent /= norm;
      break;
    }
  }
  Vector x = (1.0 - cosine.one_minus_t) * direction + cosine.sine * tangent;
  return x / x.norm();
}

StiefelPoint vmf_sample_column_gibbs(const VmfParam& c, const StiefelPoint& x_init, int sweeps,
                                     Rng& rng) {
  require_same_shape(x_init, c, "vmf_sample_column_gibbs");
  if (sweeps < 1) throw InvalidArgument("vmf_sample_column_gibbs: sweeps must be >= 1");

  const Eigen::Index p = c.ambient_dim();
  const Eigen::Index d = c.frame_dim();
  const Eigen::Index free_dim = p - d + 1;
  Matrix x = x_init.matrix();
  Matrix others(p, d - 1);
  Vector embedded(p);

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    if (d == 1) {
      const double kappa = c.matrix().col(0).norm();
      x.col(0) = kappa > 0.0 ? vmf_sample_vector(c.matrix().col(0) / kappa, kappa, rng)
                             : uniform_on_sphere(p, rng);
      continue;
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      for (Eigen::Index j = 0, col = 0; j < d; ++j) {
        if (j != k) others.col(col++) = x.col(j);
      }
      // The complement of the other columns is spanned by the trailing
      // columns of the Householder Q; it is applied implicitly, never formed.
      Eigen::HouseholderQR<Matrix> qr(others);
      const auto q = qr.householderQ();
      const Vector coords = q.adjoint() * c.matrix().col(k);
      const Vector target = coords.tail(free_dim);

      Vector z(free_dim);
      if (free_dim == 1) {
        // Two-point conditional {+n, -n} with odds exp(2·c_kᵀn).
        const double plus = 1.0 / (1.0 + std::exp(-2.0 * target[0]));
        z[0] = rng.uniform() < plus ? 1.0 : -1.0;
      } else {
        const double kappa = target.norm();
        z = kappa > 0.0 ? vmf_sample_vector(target / kappa, kappa, rng)
                        : uniform_on_sphere(free_dim, rng);
      }
      embedded.setZero();
      embedded.tail(free_dim) = z;
      x.col(k) = q * embedded;
    }
  }
  return StiefelPoint(std::move(x));
}

double log_vector_acceptance(Eigen::Index m, double kappa) {
  if (m < 1) throw InvalidArgument("log_vector_acceptance needs m >= 1");
  if (!(kappa >= 0.0)) throw InvalidArgument("log_vector_acceptance needs kappa >= 0");
  if (kappa == 0.0) return 0.0;
  if (m == 1) return std::log1p(std::exp(-2.0 * kappa)) - std::log(2.0);
  const double nu = 0.5 * static_cast<double>(m) - 1.0;
  double log_bessel;
  if (kappa > 500.0) {
    log_bessel = kappa - 0.5 * std::log(2.0 * std::numbers::pi * kappa) -
                 (4.0 * nu * nu - 1.0) / (8.0 * kappa);
  } else {
    const double bessel = boost::math::cyl_bessel_i(nu, kappa);
    if (bessel > std::numeric_limits<double>::min() && std::isfinite(bessel)) {
      log_bessel = std::log(bessel);
    } else {
      // Small-argument leading term.
      log_bessel = nu * std::log(0.5 * kappa) - std::lgamma(nu + 1.0);
    }
  }
  const double value = std::lgamma(0.5 * static_cast<double>(m)) +
                       nu * std::log(2.0 / kappa) + log_bessel - kappa;
  return std::min(value, 0.0);
}

double estimated_log_acceptance(const Vector& singular_values, Eigen::Index ambient_dim) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < singular_values.size(); ++k) {
    total += log_vector_acceptance(ambient_dim - k, singular_values[k]);
  }
  return total;
}

VmfDraw vmf_sample(const VmfParam& c, Rng& rng, const SamplerPolicy& policy,
                   const StiefelPoint* warm_start) {
  int attempts = 0;
  const Vector singular_values = thin_svd(c.matrix()).singular_values;
  const double concentration = singular_values.sum();
  // Skip rejection when even max_attempts·e^3 proposals would be expected to
  // fall short; success would then be under about 5%.
  const bool worth_trying =
      concentration <= policy.rejection_concentration_limit &&
      estimated_log_acceptance(singular_values, c.ambient_dim()) + 3.0 >=
          -std::log(static_cast<double>(policy.max_attempts));
  if (worth_trying) {
    RejectionResult rejection = vmf_sample_rejection(c, rng, policy.max_attempts);
    attempts = rejection.attempts;
    if (rejection.sample) {
      return {std::move(*rejection.sample), SamplerPath::kRejection, attempts};
    }
  }
  const StiefelPoint start = warm_start ? *warm_start : vmf_mode(c);
  return {vmf_sample_column_gibbs(c, start, policy.gibbs_sweeps, rng), SamplerPath::kColumnGibbs,
          attempts};
}

void SamplerStats::record(const VmfDraw& draw) {
  ++draws;
  rejection_attempts += static_cast<std::uint64_t>(draw.attempts);
  if (draw.path == SamplerPath::kColumnGibbs) ++fallbacks;
}

double SamplerStats::acceptance_rate() const {
  if (rejection_attempts == 0) return 0.0;
  return static_cast<double>(draws - fallbacks) / static_cast<double>(rejection_attempts);
}

}  // namespace nlpca
