#ifndef BPLS_RNG_HPP
#define BPLS_RNG_HPP

#include <array>
#include <cstdint>
#include <string>

#include "bpls/errors.hpp"

namespace bpls {

// Deterministic random stream. The generator is xoshiro256++ seeded through
// splitmix64, with all variate transformations implemented here rather than
// delegated to <random>: the standard library leaves distribution algorithms
// unspecified, and we require identical sequences for identical seeds on
// every platform.
//
// Streams are splittable: child(tag1, tag2) derives an independent stream
// from the parent's base seed. Row-level sampler kernels use one child per
// (iteration, block, row) so that serial and OpenMP execution produce
// bit-identical results.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  static constexpr const char* kAlgorithm = "xoshiro256++";

  std::uint64_t seed() const { return seed_; }
  const std::string& algorithm() const { return algorithm_; }

  // Independent stream derived from (base seed, tag1, tag2).
  RngStream child(std::uint64_t tag1, std::uint64_t tag2 = 0) const;

  std::uint64_t next_u64();

  // Uniform on (0,1); 53-bit resolution, never returns 0 or 1.
  double uniform();

  // Standard normal via Box-Muller; pairs are cached.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Gamma(shape, rate) by Marsaglia-Tsang, shape<1 handled by boosting.
  double gamma(double shape, double rate);

  double beta(double a, double b);

  double exponential(double rate);

  // Inverse-Gaussian in the mean/shape parameterization, via the
  // Michael-Schucany-Haas transformation with Bernoulli correction.
  double inverse_gaussian(double mu, double shape);

  int bernoulli(double p) { return uniform() < p ? 1 : 0; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_;
  std::string algorithm_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace bpls

#endif  // BPLS_RNG_HPP
