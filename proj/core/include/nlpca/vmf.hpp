#pragma once

#include <cstdint>
#include <optional>

#include "nlpca/random.hpp"
#include "nlpca/stiefel.hpp"
#include "nlpca/types.hpp"

namespace nlpca {

/// Parameter C of the matrix von Mises-Fisher density p(X|C) ∝ exp{tr(CᵀX)}
/// on the Stiefel manifold. The left/right singular vectors of C fix the
/// mode; its singular values act as concentrations.
class VmfParam {
 public:
  explicit VmfParam(Matrix c_matrix);

  const Matrix& matrix() const { return c_; }
  Eigen::Index ambient_dim() const { return c_.rows(); }
  Eigen::Index frame_dim() const { return c_.cols(); }

 private:
  Matrix c_;
};

/// tr(CᵀX). The normalizing constant is left to callers.
double vmf_log_density_unnorm(const StiefelPoint& x, const VmfParam& c);

StiefelPoint vmf_mode(const VmfParam& c);

struct RejectionResult {
  std::optional<StiefelPoint> sample;  // empty when max_attempts ran out
  int attempts = 0;
};

/// Rejection sampler with the uniform Stiefel distribution as proposal and
/// envelope exp(Σ_k d_k), d_k the singular values of C.
RejectionResult vmf_sample_rejection(const VmfParam& c, Rng& rng, int max_attempts);

/// Exact draw from the vector vMF density ∝ exp(kappa·directionᵀx) on
/// S^{p-1}: Wood's beta-envelope rejection for the cosine to `direction`
/// plus a uniform tangent direction.
Vector vmf_sample_vector(const Vector& direction, double kappa, Rng& rng);

/// `sweeps` passes of column-wise Gibbs sampling started at `x_init`. Each
/// column is redrawn from its full conditional, a vector vMF on the unit
/// sphere of the complement of the remaining columns.
StiefelPoint vmf_sample_column_gibbs(const VmfParam& c, const StiefelPoint& x_init, int sweeps,
                                     Rng& rng);

struct SamplerPolicy {
  int max_attempts = 10000;
  int gibbs_sweeps = 10;
  // Rejection is skipped outright when Σ_k d_k exceeds this; the uniform
  // envelope acceptance rate is negligible there.
  double rejection_concentration_limit = 50.0;
  // Inside the outer sampler: start the fallback chain at the site's current
  // frame (true) or at the conditional mode (false).
  bool warm_start = true;
};

enum class SamplerPath { kRejection, kColumnGibbs };

struct VmfDraw {
  StiefelPoint sample;
  SamplerPath path;
  int attempts;  // rejection proposals spent, including a failed run
};

/// Rejection first; on exhaustion (or above the concentration limit) falls
/// back to column-Gibbs started at `warm_start` if given, else at the mode.
VmfDraw vmf_sample(const VmfParam& c, Rng& rng, const SamplerPolicy& policy,
                   const StiefelPoint* warm_start = nullptr);

/// Rough log acceptance rate of the uniform-envelope sampler, treating the
/// columns as independent vector vMFs on shrinking spheres. Used only to
/// decide whether rejection is worth attempting.
double estimated_log_acceptance(const Vector& singular_values, Eigen::Index ambient_dim);

/// Log of E[exp(κ·t)]·exp(-κ) for t the first coordinate of a uniform point
/// on S^{m-1}, i.e. the vector vMF acceptance rate under a uniform envelope.
double log_vector_acceptance(Eigen::Index m, double kappa);

/// Running counters for sampler health reporting.
struct SamplerStats {
  std::uint64_t draws = 0;
  std::uint64_t fallbacks = 0;
  std::uint64_t rejection_attempts = 0;

  void record(const VmfDraw& draw);
  double acceptance_rate() const;
};

}  // namespace nlpca
