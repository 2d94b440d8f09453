#pragma once

#include "nlpca/dataset.hpp"
#include "nlpca/stiefel.hpp"
#include "nlpca/types.hpp"

namespace nlpca {

/// Linear PCA from the SVD Y/√n = U·D·Vᵀ.
struct PcaFit {
  StiefelPoint loadings;   // V, p×d; each column's largest-magnitude entry is positive
  Vector singular_values;  // D, descending, length d
  Matrix latents;          // X = Y·V, n×d
};

PcaFit pca_fit(const Dataset& data, Eigen::Index d);

/// Zero-noise limit of the PPCA maximum-likelihood loading, W = V·D.
Matrix ppca_ml_loading(const Dataset& data, Eigen::Index d);

/// Ŷ = X·Vᵀ.
Matrix reconstruct_linear(const PcaFit& fit);

/// Mean squared PCA residual per scalar entry, Σ_i‖y_i - ŷ_i‖² / (n·p).
double pilot_tau2(const Dataset& data, Eigen::Index d);

/// Per-column sample variance (n-1 denominator), averaged over columns.
double avg_variance(const Dataset& data);

}  // namespace nlpca
