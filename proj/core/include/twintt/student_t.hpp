#pragma once

#include <cstdint>

#include "twintt/rng.hpp"

namespace twintt {

/// Conventional Student-t distribution; used as the rejection proposal for
/// the twin-t sampler, as a regression error family, and as simulation
/// truth. nu = infinity degenerates to the standard normal.
class StudentT {
 public:
  explicit StudentT(double nu);

  double nu() const { return nu_; }

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;

  double draw(Rng& rng) const;

 private:
  double nu_;
  double log_norm_;
  bool normal_limit_;
};

}  // namespace twintt
