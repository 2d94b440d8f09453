#include "nlpca/random.hpp"

#include <boost/random/beta_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace nlpca {

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

Rng Rng::resume(std::uint64_t seed, std::uint64_t counter) {
  Rng rng(seed);
  rng.engine_.discard(counter);
  rng.counter_ = counter;
  return rng;
}

double Rng::uniform() { return boost::random::uniform_01<double>()(*this); }

double Rng::normal() { return boost::random::normal_distribution<double>()(*this); }

double Rng::gamma(double shape, double rate) {
  return boost::random::gamma_distribution<double>(shape, 1.0 / rate)(*this);
}

double Rng::beta(double a, double b) {
  return boost::random::beta_distribution<double>(a, b)(*this);
}

Vector Rng::normal_vector(Eigen::Index size) {
  Vector v(size);
  for (Eigen::Index k = 0; k < size; ++k) v[k] = normal();
  return v;
}

}  // namespace nlpca
