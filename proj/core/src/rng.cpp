#include "twintt/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace twintt {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  // Distinct streams diverge by folding the stream index into the seed with
  // a second splitmix pass; splitmix64 then fills the xoshiro state.
  std::uint64_t s = seed;
  std::uint64_t t = stream * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull;
  s ^= splitmix64(t);
  for (auto& w : state_) w = splitmix64(s);
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  // 53 high bits; add half an ulp so the result lies strictly inside (0,1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u, v, w;
  do {
    u = uniform(-1.0, 1.0);
    v = uniform(-1.0, 1.0);
    w = u * u + v * v;
  } while (w >= 1.0 || w == 0.0);
  const double m = std::sqrt(-2.0 * std::log(w) / w);
  spare_normal_ = v * m;
  has_spare_ = true;
  return u * m;
}

double Rng::student_t(double df) {
  if (!(df > 0.0)) throw std::domain_error("student_t: df must be > 0");
  if (std::isinf(df)) return normal();
  // Polar method: for (u,v) uniform in the unit disc,
  // u * sqrt(df*(w^(-2/df)-1)/w) is exactly t(df).
  double u, v, w;
  do {
    u = uniform(-1.0, 1.0);
    v = uniform(-1.0, 1.0);
    w = u * u + v * v;
  } while (w >= 1.0 || w == 0.0);
  return u * std::sqrt(df * (std::pow(w, -2.0 / df) - 1.0) / w);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be > 0");
  if (shape < 1.0) {
    // Boost: G(a) = G(a+1) * U^(1/a).
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
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
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta(double a, double b) {
  const double ga = gamma(a);
  const double gb = gamma(b);
  return ga / (ga + gb);
}

}  // namespace twintt
