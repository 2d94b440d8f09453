#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "nlpca/gibbs.hpp"

namespace nlpca {

/// Resumable sampler snapshot.
///
/// JSON layout: {n, p, d, sigma2, seed, counter, sweep, hyperparams,
/// transformations: [[p·d entries, row-major] × n], latents: [[d] × n]}.
/// `sweep` is the index of the next sweep to run. Doubles are written in
/// shortest round-trip form, so save/load is bit-exact.
struct Checkpoint {
  ModelState state;
  HyperParams hyperparams;
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;
  int sweep = 0;
};

std::string checkpoint_to_json(const Checkpoint& checkpoint);
/// Weights are recomputed from the stored latents and hyperparameters.
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace nlpca
