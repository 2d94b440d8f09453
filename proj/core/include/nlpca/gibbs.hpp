#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "nlpca/dataset.hpp"
#include "nlpca/mrf.hpp"
#include "nlpca/random.hpp"
#include "nlpca/stiefel.hpp"
#include "nlpca/types.hpp"
#include "nlpca/vmf.hpp"

namespace nlpca {

/// Model:
///   y_i = V_i x_i + ε_i,          ε_i ~ N(0, σ² I_p)
///   {V_i} | {x_i} ~ MRF(λ),       λ_ij = c·exp(-‖x_i - x_j‖² / 2w²)
///   x_i ~ N(0, a² I_d)            (a² = ∞ gives the flat prior)
///   1/σ² ~ Gamma(shape η/2, rate ητ²/2)
struct HyperParams {
  double a2 = std::numeric_limits<double>::infinity();
  double eta = 2.0;
  double tau2 = 1.0;
  double c_strength = 1.0;
  double bandwidth = 1.0;
  Eigen::Index d = 2;
  SamplerPolicy sampler;
  int n_sweeps = 2000;
  int burn_in = 1000;
  int thin = 5;

  bool flat_latent_prior() const { return std::isinf(a2); }
  void validate() const;
};

/// Optional overrides for the data-driven defaults.
struct PriorOverrides {
  enum class A2Mode { kAuto, kInfinite, kFixed };
  A2Mode a2_mode = A2Mode::kAuto;
  double a2 = 0.0;  // used with kFixed
  std::optional<double> c_strength;
  std::optional<double> bandwidth;
  std::optional<double> tau2;
};

/// Smallest τ² accepted, relative to the average covariate variance.
inline constexpr double kRelativeTau2Floor = 1e-10;

/// Fills a², τ², c and w from the data: a² = average covariate variance,
/// τ² = d-dimensional PCA residual per entry, c = 100/n, w = mean pairwise
/// distance between the initial (PCA) latents.
HyperParams make_hyperparams(const Dataset& data, Eigen::Index d, const PriorOverrides& overrides = {});

struct ModelState {
  std::vector<StiefelPoint> transformations;
  Matrix latents;  // n×d
  double sigma2 = 1.0;
  InteractionWeights weights;

  Matrix reconstruction() const;
};

/// PCA initialization: every V_i = V_pca, x_i = V_pcaᵀ y_i, σ² = τ².
ModelState init_state(const Dataset& data, const HyperParams& hp);

/// Draw of V_i from vMF(y_i x_iᵀ / σ² + Σ_{j≠i} λ_ij V_j), warm-started at the
/// current V_i when the column-Gibbs fallback runs.
VmfDraw update_transformation(Eigen::Index site, const ModelState& state, const Dataset& data,
                              const SamplerPolicy& policy, Rng& rng);

/// Draw of x_i from N(a²/(a²+σ²)·V_iᵀy_i, a²σ²/(a²+σ²)·I).
Vector update_latent(Eigen::Index site, const ModelState& state, const Dataset& data, double a2,
                     Rng& rng);

/// σ² = 1/φ with φ ~ Gamma((η + np)/2, rate (ητ² + Σ‖y_i - V_i x_i‖²)/2).
double update_noise(const ModelState& state, const Dataset& data, const HyperParams& hp, Rng& rng);

/// Unnormalized log posterior: Gaussian likelihood, MRF term, latent prior
/// (dropped when a² = ∞) and the Gamma prior kernel in 1/σ².
double log_posterior_unnorm(const ModelState& state, const Dataset& data, const HyperParams& hp);

struct SweepResult {
  double log_posterior;
  std::uint64_t fallbacks;
};

/// One Gibbs sweep in place: all V_i in order, all x_i, λ from the new
/// latents (c and w fixed), then σ².
SweepResult sweep(ModelState& state, const Dataset& data, const HyperParams& hp, Rng& rng,
                  SamplerStats* stats = nullptr);

struct TraceRow {
  int sweep;
  double sigma2;
  double log_posterior;
  std::uint64_t fallbacks;
};

struct PosteriorSummary {
  std::vector<StiefelPoint> mean_transformations;
  Matrix mean_latents;
  std::vector<double> sigma2_trace;         // kept sweeps only
  std::vector<double> log_posterior_trace;  // every sweep
  std::vector<TraceRow> trace;              // every sweep
  SamplerStats sampler_diagnostics;
  int kept = 0;
};

/// Called after every sweep with the new state.
using SweepObserver = std::function<void(const TraceRow&, const ModelState&)>;

/// Runs sweeps [first_sweep, hp.n_sweeps) on `state`. Sweeps s ≥ burn_in with
/// (s - burn_in) % thin == 0 are averaged; averaged frames are polar-projected
/// back onto the manifold.
PosteriorSummary run_chain(ModelState& state, int first_sweep, const Dataset& data,
                           const HyperParams& hp, Rng& rng, const SweepObserver& observer = {});

/// init_state followed by the full chain.
PosteriorSummary run(const Dataset& data, const HyperParams& hp, Rng& rng);

/// ŷ_i = mean V_i · mean x_i, in centered coordinates.
Matrix reconstruct_nonlinear(const PosteriorSummary& summary);

}  // namespace nlpca
