#include "bpls/rng.hpp"

#include <cmath>

namespace bpls {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed), algorithm_(kAlgorithm) {
  std::uint64_t x = seed;
  for (auto& w : s_) w = splitmix64(x);
}

RngStream RngStream::child(std::uint64_t tag1, std::uint64_t tag2) const {
  // Mix the tags into the base seed through two splitmix rounds; distinct
  // (seed, tag1, tag2) triples give distinct child seeds in practice.
  std::uint64_t x = seed_ ^ (0x633d5c4c9e3779b9ULL + tag1);
  std::uint64_t a = splitmix64(x);
  x ^= 0xd1b54a32d192ed03ULL + tag2;
  std::uint64_t b = splitmix64(x);
  return RngStream(a ^ rotl(b, 17));
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  // 53 significant bits, shifted into (0,1).
  const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return u > 0.0 ? u : 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  cached_normal_ = r * std::sin(kTwoPi * u2);
  has_cached_normal_ = true;
  return r * std::cos(kTwoPi * u2);
}

double RngStream::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw InvalidParameter("gamma: shape and rate must be positive");
  if (shape < 1.0) {
    // Boost: X ~ Gamma(shape+1), U^{1/shape} scaling.
    const double u = uniform();
    return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double RngStream::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw InvalidParameter("beta: parameters must be positive");
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  return x / (x + y);
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) throw InvalidParameter("exponential: rate must be positive");
  return -std::log(uniform()) / rate;
}

double RngStream::inverse_gaussian(double mu, double shape) {
  if (!(mu > 0.0) || !(shape > 0.0))
    throw InvalidParameter("inverse_gaussian: mu and shape must be positive");
  const double z = normal();
  const double nu = z * z;
  const double ratio = mu / (2.0 * shape);
  const double x =
      mu + mu * ratio * nu - ratio * std::sqrt(4.0 * mu * shape * nu + mu * mu * nu * nu);
  const double u = uniform();
  if (u <= mu / (mu + x)) return x > 0.0 ? x : mu * 1e-300;
  return mu * mu / x;
}

}  // namespace bpls
