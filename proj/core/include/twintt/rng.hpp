#pragma once

#include <cstdint>

namespace twintt {

/// Deterministic random stream: xoshiro256++ seeded through splitmix64.
///
/// The generator is fully specified here, so sequences are reproducible
/// across platforms and compilers. A (seed, stream) pair selects an
/// independent stream; parallel tasks each take their own stream index and
/// never share state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Next raw 64-bit word.
  std::uint64_t next_u64();

  /// Uniform on (0, 1): 53-bit mantissa, never returns 0 or 1.
  double uniform();

  /// Uniform on (lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal via the Marsaglia polar method (second variate cached).
  double normal();

  /// Student-t variate with df degrees of freedom, polar rejection method.
  double student_t(double df);

  /// Gamma(shape, 1) via Marsaglia-Tsang squeeze, valid for any shape > 0.
  double gamma(double shape);

  /// Beta(a, b) as a ratio of gammas.
  double beta(double a, double b);

 private:
  std::uint64_t state_[4];
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace twintt
