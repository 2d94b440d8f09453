#pragma once

#include <Eigen/Dense>

namespace nlpca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Orthonormality bound enforced when a frame is constructed.
inline constexpr double kFrameTolerance = 1e-10;
// Looser bound for checks on quantities derived from frames.
inline constexpr double kDerivedTolerance = 1e-8;

}  // namespace nlpca
