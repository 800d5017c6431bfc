#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qfbsde/model.hpp"
#include "qfbsde/random.hpp"

// Monte Carlo estimate of the exact solution obtained through the Cole-Hopf
// transform K = exp(-gamma (1 - rho^2) V):
//
//   V_0 = -1 / (gamma (1 - rho^2)) ln E*[ exp(-(mu^2 / 2)(1 - rho^2) int_0^T ds / X_s) ]
//
// with X mean-reverting to the adjusted level n under the changed measure.

namespace qfbsde {

/// Which side of x0 the Z estimator revalues at.
enum class BumpScheme {
  backward,  // (V(x0) - V(x0 - h)) / h
  forward,   // (V(x0 + h) - V(x0)) / h
  central,   // (V(x0 + h) - V(x0 - h)) / 2h
};

struct McConfig {
  std::size_t n_pairs = 200000;  // antithetic pairs; a pair is one sample
  double dt = 0.005;
  double bump = 5e-4;
  std::uint64_t seed = 42;
  bool common_random_numbers = true;
  BumpScheme bump_scheme = BumpScheme::backward;
  std::size_t chunk_size = 4096;  // pairs per work unit
  unsigned threads = 0;           // 0: hardware concurrency

  friend bool operator==(const McConfig&, const McConfig&) = default;
};

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t n_samples = 0;
};

/// Number of grid steps for horizon T. Throws ConfigError unless T / dt is an
/// integer (to 1e-9 relative).
std::size_t step_count(double T, double dt);

/// Throws ConfigError naming the offending field.
void check_config(const McConfig& cfg, double T);

/// Drift-implicit Milstein step
///   X_n = [X_{n-1} + k mean dt + c sqrt(X_{n-1}) xi sqrt(dt) + c^2 dt (xi^2 - 1) / 4] / (1 + k dt).
/// The numerator equals (sqrt(x) + c xi sqrt(dt) / 2)^2 + (k mean - c^2/4) dt, so
/// the result stays positive whenever dyn.milstein_positive().
double milstein_step(double x_prev, double xi, double dt, const VarianceDynamics& dyn) noexcept;

inline double milstein_step(double x_prev, double xi, double dt,
                            const AdjustedParams& adj) noexcept {
  return milstein_step(x_prev, xi, dt, adj.dynamics());
}

/// Trapezoidal integral of 1 / X over a uniform grid with spacing dt.
double path_integral(std::span<const double> x_path, double dt);

/// Grid values X_0..X_steps driven by `normals` (sign = -1 gives the antithetic path).
std::vector<double> simulate_variance_path(double x0, const VarianceDynamics& dyn, double dt,
                                           std::size_t steps, NormalStream normals,
                                           double sign = 1.0);

/// The path payoff exp(-(mu^2/2)(1 - rho^2) integral).
double path_payoff(const ValidatedParams& params, double integral) noexcept;

/// V_0 at horizon T starting from x0.
McEstimate mc_value(const ValidatedParams& params, double T, double x0, const McConfig& cfg);

/// V_0 at every maturity, all read off the same simulated paths. Maturities
/// must be positive, strictly increasing and on the dt grid.
std::vector<McEstimate> mc_value_curve(const ValidatedParams& params,
                                       std::span<const double> maturities, double x0,
                                       const McConfig& cfg);

/// Z_0 = c sqrt(x0) dV/dx0 by revaluing at a shifted x0 (see BumpScheme).
McEstimate mc_z(const ValidatedParams& params, double T, double x0, const McConfig& cfg);

std::vector<McEstimate> mc_z_curve(const ValidatedParams& params,
                                   std::span<const double> maturities, double x0,
                                   const McConfig& cfg);

}  // namespace qfbsde
