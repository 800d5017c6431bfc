#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qfbsde/model.hpp"

namespace qfbsde::testing {

struct RandomCase {
  ModelParams params;
  double tau;  // T - t
  double x;
};

/// Log-uniform parameter sets over the ranges used by the property suites:
/// mu in [0.05, 0.3], k in [0.05, 0.5], m in [0.01, 0.2], c in [0.005, 0.1],
/// rho uniform in (-0.9, 0.9), gamma in [0.5, 5], T - t in [0.1, 10], x in [m/2, 2m].
class CaseGenerator {
 public:
  explicit CaseGenerator(std::uint64_t seed) : rng_(seed) {}

  RandomCase next() {
    RandomCase rc;
    rc.params.mu = log_uniform(0.05, 0.3);
    rc.params.k = log_uniform(0.05, 0.5);
    rc.params.m = log_uniform(0.01, 0.2);
    rc.params.c = log_uniform(0.005, 0.1);
    rc.params.rho = std::uniform_real_distribution<double>(-0.9, 0.9)(rng_);
    rc.params.gamma = log_uniform(0.5, 5.0);
    rc.tau = log_uniform(0.1, 10.0);
    rc.x = log_uniform(rc.params.m / 2, 2 * rc.params.m);
    return rc;
  }

 private:
  double log_uniform(double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng_));
  }

  std::mt19937_64 rng_;
};

}  // namespace qfbsde::testing
