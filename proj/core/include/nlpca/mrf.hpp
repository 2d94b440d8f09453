#pragma once

#include <span>

#include "nlpca/stiefel.hpp"
#include "nlpca/types.hpp"
#include "nlpca/vmf.hpp"

namespace nlpca {

/// Pairwise couplings λ_ij = c·exp(-‖x_i - x_j‖² / (2w²)) of the
/// complete-graph Markov random field over per-site frames.
struct InteractionWeights {
  Matrix lambda;  // n×n, symmetric, zero diagonal
  double c_strength = 0.0;
  double bandwidth = 0.0;
};

// Bandwidths below this are treated as degenerate.
inline constexpr double kMinBandwidth = 1e-8;

InteractionWeights compute_weights(const Matrix& latents, double c_strength, double bandwidth);

/// Mean pairwise Euclidean distance between latent rows.
double default_bandwidth(const Matrix& latents);

/// 100 / n.
double default_strength(Eigen::Index n);

/// C_i = Σ_{j≠i} λ_ij V_j, the parameter of site i's full conditional.
VmfParam conditional_param(Eigen::Index site, std::span<const StiefelPoint> transformations,
                           const InteractionWeights& weights);

/// Σ_{i<j} λ_ij tr(V_iᵀV_j).
double mrf_log_density_unnorm(std::span<const StiefelPoint> transformations,
                              const InteractionWeights& weights);

}  // namespace nlpca
