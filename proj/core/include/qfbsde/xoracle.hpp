#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qfbsde/model.hpp"

// Euler-Maruyama simulation of the delta-derivatives of the variance process,
//   dD = -k D du + c sqrt(X0_u) dB
//   dE = -k E du + c X0_u^{-1/2} D dB
//   dF = -k F du + (3/2) c (X0_u^{-1/2} E - (1/2) X0_u^{-3/2} D^2) dB,
// all started at zero and driven by one Brownian path. Their sample moments
// check the conditional-moment identities behind the closed forms.

namespace qfbsde {

struct ExpansionPathBundle {
  std::vector<double> grid;
  std::vector<double> x0_path;
  std::vector<double> d_path;
  std::vector<double> e_path;
  std::vector<double> f_path;
};

/// One path of (D, E, F) on [0, horizon]. `path` selects the noise stream;
/// `negate_noise` flips every Brownian increment.
ExpansionPathBundle simulate_def(const ValidatedParams& params, double x_t, double horizon,
                                 double dt, std::uint64_t seed, std::uint64_t path = 0,
                                 bool negate_noise = false);

struct MomentEstimate {
  double mean = 0.0;
  double std_err = 0.0;
};

struct MomentReport {
  double time = 0.0;  // elapsed since the start of the paths
  std::size_t n_paths = 0;
  MomentEstimate d, e, f, d2, d3, de;
};

/// Moments of the ensemble at the last grid point of each bundle.
MomentReport moment_estimates(std::span<const ExpansionPathBundle> ensemble);

struct OracleConfig {
  std::size_t n_paths = 100000;
  double dt = 0.005;
  double horizon = 1.0;
  std::uint64_t seed = 42;
  std::size_t chunk_size = 4096;
  unsigned threads = 0;
  bool all_grid_points = false;  // report every grid point, not only the horizon
};

/// Streams independent paths without storing them. Returns one report (the
/// horizon) or one per grid point when cfg.all_grid_points is set.
std::vector<MomentReport> run_moment_oracle(const ValidatedParams& params, double x_t,
                                            const OracleConfig& cfg);

/// One line of the validation summary.
struct OracleCheck {
  std::string name;
  double estimate = 0.0;
  double std_err = 0.0;
  double target = 0.0;
  bool passed = false;
};

/// Compares a report against its targets: zero for E[D], E[E], E[F], E[D^3],
/// E[DE]; the closed-form d2_moment for E[D^2]. Each must lie within
/// `sigmas` standard errors.
std::vector<OracleCheck> check_moments(const MomentReport& report, const ValidatedParams& params,
                                       double x_t, double sigmas = 3.0);

}  // namespace qfbsde
