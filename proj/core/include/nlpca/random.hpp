#pragma once

#include <cstdint>
#include <random>

#include "nlpca/types.hpp"

namespace nlpca {

/// Seeded 64-bit Mersenne twister that counts the words it has produced.
///
/// The (seed, counter) pair fully determines the stream position, so a
/// sampler can be checkpointed and resumed bit-exactly with `Rng::resume`.
/// All variates are drawn through Boost.Random distributions, which are
/// stateless between calls and identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);
  static Rng resume(std::uint64_t seed, std::uint64_t counter);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() {
    ++counter_;
    return engine_();
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  double uniform();  // [0, 1)
  double normal();
  double gamma(double shape, double rate);
  double beta(double a, double b);
  Vector normal_vector(Eigen::Index size);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace nlpca
