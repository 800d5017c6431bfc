#include "qfbsde/colehopf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace qfbsde {
namespace {

// Payoffs lie in (0, 1]. Summing them as 2^-62 fixed point in 128-bit
// integers makes the reduction exact, so results do not depend on chunking.
__extension__ typedef __int128 Wide;
constexpr double kFixedScale = 0x1.0p62;

inline Wide to_fixed(double v) noexcept { return static_cast<Wide>(std::llround(v * kFixedScale)); }
inline long double from_fixed(Wide v) noexcept {
  return static_cast<long double>(v) / static_cast<long double>(kFixedScale);
}

constexpr std::size_t kMaxLegs = 2;

// Sums over pairs for each leg (starting variance) and checkpoint.
struct Sums {
  std::size_t legs = 0;
  std::size_t points = 0;
  std::vector<Wide> s, ss, cross;

  Sums(std::size_t n_legs, std::size_t n_points)
      : legs(n_legs), points(n_points), s(n_legs * n_points), ss(n_legs * n_points),
        cross(n_points) {}

  Sums& operator+=(const Sums& o) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] += o.s[i];
      ss[i] += o.ss[i];
    }
    for (std::size_t i = 0; i < cross.size(); ++i) cross[i] += o.cross[i];
    return *this;
  }
};

struct Moments {
  long double mean_a, var_a, mean_b, var_b, cov;
};

struct Engine {
  VarianceDynamics dyn;
  double dt;
  double payoff_rate;  // -(mu^2/2)(1 - rho^2)
  std::vector<std::size_t> checkpoints;
  std::vector<double> x0s;
  std::uint64_t seed;
  std::uint32_t stream;

  void run_pair(std::uint64_t pair, Sums& acc) const {
    const std::size_t n_legs = x0s.size();
    std::array<double, 2 * kMaxLegs> x{}, inv{}, integral{};
    for (std::size_t l = 0; l < n_legs; ++l) {
      x[2 * l] = x[2 * l + 1] = x0s[l];
      inv[2 * l] = inv[2 * l + 1] = 1.0 / x0s[l];
    }
    NormalStream normals(seed, pair, stream);
    const double half_dt = 0.5 * dt;
    const std::size_t n_paths = 2 * n_legs;

    std::size_t next_point = 0;
    const std::size_t last = checkpoints.back();
    for (std::size_t step = 1; step <= last; ++step) {
      const double xi = normals.next();
      for (std::size_t p = 0; p < n_paths; ++p) {
        const double draw = (p % 2 == 0) ? xi : -xi;
        x[p] = milstein_step(x[p], draw, dt, dyn);
        const double inv_new = 1.0 / x[p];
        integral[p] += half_dt * (inv[p] + inv_new);
        inv[p] = inv_new;
      }
      if (step == checkpoints[next_point]) {
        std::array<double, kMaxLegs> payoff{};
        for (std::size_t l = 0; l < n_legs; ++l) {
          payoff[l] = 0.5 * (std::exp(payoff_rate * integral[2 * l]) +
                             std::exp(payoff_rate * integral[2 * l + 1]));
          const std::size_t idx = l * acc.points + next_point;
          acc.s[idx] += to_fixed(payoff[l]);
          acc.ss[idx] += to_fixed(payoff[l] * payoff[l]);
        }
        if (n_legs == 2) acc.cross[next_point] += to_fixed(payoff[0] * payoff[1]);
        ++next_point;
      }
    }
  }

  Sums run(const McConfig& cfg) const {
    const std::size_t chunk = std::max<std::size_t>(1, cfg.chunk_size);
    const std::size_t n_chunks = (cfg.n_pairs + chunk - 1) / chunk;
    std::vector<Sums> partial(n_chunks, Sums(x0s.size(), checkpoints.size()));
    detail::for_each_chunk(n_chunks, cfg.threads, [&](std::size_t c) {
      const std::uint64_t begin = c * chunk;
      const std::uint64_t end = std::min<std::uint64_t>(cfg.n_pairs, begin + chunk);
      for (std::uint64_t pair = begin; pair < end; ++pair) run_pair(pair, partial[c]);
    });
    Sums total(x0s.size(), checkpoints.size());
    for (const auto& p : partial) total += p;
    return total;
  }
};

Moments moments(const Sums& sums, std::size_t point, std::size_t n) {
  const long double N = static_cast<long double>(n);
  const auto mean = [&](Wide v) { return from_fixed(v) / N; };
  const auto var = [&](Wide sq, long double mu) {
    if (n < 2) return std::numeric_limits<long double>::infinity();
    const long double v = (from_fixed(sq) / N - mu * mu) * N / (N - 1);
    return std::max(v, 0.0L);
  };
  Moments out{};
  out.mean_a = mean(sums.s[point]);
  out.var_a = var(sums.ss[point], out.mean_a);
  if (sums.legs == 2) {
    out.mean_b = mean(sums.s[sums.points + point]);
    out.var_b = var(sums.ss[sums.points + point], out.mean_b);
    out.cov = n < 2 ? 0.0L
                    : (from_fixed(sums.cross[point]) / N - out.mean_a * out.mean_b) * N / (N - 1);
  }
  return out;
}

std::vector<std::size_t> checkpoints_for(std::span<const double> maturities, double dt) {
  if (maturities.empty()) throw ConfigError("at least one maturity is required");
  std::vector<std::size_t> steps;
  steps.reserve(maturities.size());
  for (double T : maturities) {
    if (!(T > 0.0)) throw ConfigError("maturities must be positive");
    const std::size_t n = step_count(T, dt);
    if (!steps.empty() && n <= steps.back())
      throw ConfigError("maturities must be strictly increasing");
    steps.push_back(n);
  }
  return steps;
}

Engine make_engine(const ValidatedParams& params, std::span<const double> maturities,
                   std::vector<double> x0s, const McConfig& cfg, std::uint32_t stream) {
  for (double T : maturities) check_config(cfg, T);
  const AdjustedParams adj = adjusted_mean(params);
  if (!adj.scheme_positive) {
    throw ConfigError("implicit Milstein positivity fails under the adjusted measure: k*n = " +
                      std::to_string(adj.k * adj.n) + " < c^2/4 = " +
                      std::to_string(0.25 * adj.c * adj.c));
  }
  for (double x0 : x0s) {
    if (!(x0 > 0.0) || !std::isfinite(x0)) throw ConfigError("initial variance must be positive");
  }
  const ModelParams& p = params.get();
  return Engine{adj.dynamics(),
                cfg.dt,
                -0.5 * p.mu * p.mu * (1.0 - p.rho * p.rho),
                checkpoints_for(maturities, cfg.dt),
                std::move(x0s),
                cfg.seed,
                stream};
}

double value_scale(const ValidatedParams& params) {
  return 1.0 / (params->gamma * (1.0 - params->rho * params->rho));
}

McEstimate to_value(const ValidatedParams& params, long double mean_payoff, long double var_payoff,
                    std::size_t n) {
  if (!(mean_payoff > 0.0L)) {
    throw std::runtime_error("mean payoff is not positive; the simulation is broken");
  }
  const double scale = value_scale(params);
  McEstimate est;
  est.mean = -scale * static_cast<double>(std::log(mean_payoff));
  est.std_err = static_cast<double>(scale * std::sqrt(var_payoff / n) / mean_payoff);
  est.n_samples = n;
  return est;
}

}  // namespace

std::size_t step_count(double T, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("horizon must be non-negative");
  const double ratio = T / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError("horizon " + std::to_string(T) + " is not a multiple of dt " +
                      std::to_string(dt));
  }
  return static_cast<std::size_t>(rounded);
}

void check_config(const McConfig& cfg, double T) {
  if (cfg.n_pairs < 1) throw ConfigError("n_pairs must be at least 1");
  if (!(cfg.bump > 0.0)) throw ConfigError("bump must be positive");
  if (cfg.chunk_size < 1) throw ConfigError("chunk_size must be at least 1");
  step_count(T, cfg.dt);
}

double milstein_step(double x_prev, double xi, double dt, const VarianceDynamics& dyn) noexcept {
  const double root = std::sqrt(x_prev);
  const double numerator = x_prev + dyn.k * dyn.mean * dt + dyn.c * root * xi * std::sqrt(dt) +
                           0.25 * dyn.c * dyn.c * dt * (xi * xi - 1.0);
  return numerator / (1.0 + dyn.k * dt);
}

double path_integral(std::span<const double> x_path, double dt) {
  double total = 0.0;
  for (std::size_t i = 1; i < x_path.size(); ++i) {
    total += 0.5 * dt * (1.0 / x_path[i - 1] + 1.0 / x_path[i]);
  }
  return total;
}

std::vector<double> simulate_variance_path(double x0, const VarianceDynamics& dyn, double dt,
                                           std::size_t steps, NormalStream normals, double sign) {
  std::vector<double> path(steps + 1);
  path[0] = x0;
  for (std::size_t i = 1; i <= steps; ++i) {
    path[i] = milstein_step(path[i - 1], sign * normals.next(), dt, dyn);
  }
  return path;
}

double path_payoff(const ValidatedParams& params, double integral) noexcept {
  const ModelParams& p = params.get();
  return std::exp(-0.5 * p.mu * p.mu * (1.0 - p.rho * p.rho) * integral);
}

std::vector<McEstimate> mc_value_curve(const ValidatedParams& params,
                                       std::span<const double> maturities, double x0,
                                       const McConfig& cfg) {
  const Engine engine = make_engine(params, maturities, {x0}, cfg, 0);
  const Sums sums = engine.run(cfg);
  std::vector<McEstimate> out;
  out.reserve(maturities.size());
  for (std::size_t i = 0; i < maturities.size(); ++i) {
    const Moments mo = moments(sums, i, cfg.n_pairs);
    out.push_back(to_value(params, mo.mean_a, mo.var_a, cfg.n_pairs));
  }
  return out;
}

McEstimate mc_value(const ValidatedParams& params, double T, double x0, const McConfig& cfg) {
  const double maturity[] = {T};
  return mc_value_curve(params, maturity, x0, cfg).front();
}

std::vector<McEstimate> mc_z_curve(const ValidatedParams& params,
                                   std::span<const double> maturities, double x0,
                                   const McConfig& cfg) {
  if (!(cfg.bump > 0.0)) throw ConfigError("bump must be positive");
  double upper = x0, lower = x0;
  switch (cfg.bump_scheme) {
    case BumpScheme::forward: upper = x0 + cfg.bump; break;
    case BumpScheme::backward: lower = x0 - cfg.bump; break;
    case BumpScheme::central:
      upper = x0 + cfg.bump;
      lower = x0 - cfg.bump;
      break;
  }
  if (!(lower > 0.0)) throw ConfigError("bump leaves the initial variance non-positive");

  const std::size_t n = cfg.n_pairs;
  std::vector<long double> mean_a(maturities.size()), var_a(maturities.size()),
      mean_b(maturities.size()), var_b(maturities.size()), cov(maturities.size());

  if (cfg.common_random_numbers) {
    const Sums sums = make_engine(params, maturities, {upper, lower}, cfg, 0).run(cfg);
    for (std::size_t i = 0; i < maturities.size(); ++i) {
      const Moments mo = moments(sums, i, n);
      mean_a[i] = mo.mean_a, var_a[i] = mo.var_a;
      mean_b[i] = mo.mean_b, var_b[i] = mo.var_b;
      cov[i] = mo.cov;
    }
  } else {
    // The x0 leg keeps stream 0 so it matches mc_value; the shifted leg draws
    // from stream 1. Central differencing shifts both legs, on streams 1 and 2.
    const std::uint32_t stream_up = upper == x0 ? 0 : 1;
    const std::uint32_t stream_lo = lower == x0 ? 0 : (upper == x0 ? 1 : 2);
    const Sums up = make_engine(params, maturities, {upper}, cfg, stream_up).run(cfg);
    const Sums lo = make_engine(params, maturities, {lower}, cfg, stream_lo).run(cfg);
    for (std::size_t i = 0; i < maturities.size(); ++i) {
      const Moments a = moments(up, i, n);
      const Moments b = moments(lo, i, n);
      mean_a[i] = a.mean_a, var_a[i] = a.var_a;
      mean_b[i] = b.mean_a, var_b[i] = b.var_a;
      cov[i] = 0.0L;
    }
  }

  const double scale = value_scale(params);
  const double factor = params->c * std::sqrt(x0) / (upper - lower);
  std::vector<McEstimate> out;
  out.reserve(maturities.size());
  for (std::size_t i = 0; i < maturities.size(); ++i) {
    if (!(mean_a[i] > 0.0L) || !(mean_b[i] > 0.0L)) {
      throw std::runtime_error("mean payoff is not positive; the simulation is broken");
    }
    const long double log_diff = std::log(mean_a[i]) - std::log(mean_b[i]);
    const long double rel_var = var_a[i] / (mean_a[i] * mean_a[i]) +
                                var_b[i] / (mean_b[i] * mean_b[i]) -
                                2.0L * cov[i] / (mean_a[i] * mean_b[i]);
    McEstimate est;
    est.mean = factor * (-scale) * static_cast<double>(log_diff);
    est.std_err = std::abs(factor) * scale *
                  static_cast<double>(std::sqrt(std::max(rel_var, 0.0L) / n));
    est.n_samples = n;
    out.push_back(est);
  }
  return out;
}

McEstimate mc_z(const ValidatedParams& params, double T, double x0, const McConfig& cfg) {
  const double maturity[] = {T};
  return mc_z_curve(params, maturity, x0, cfg).front();
}

}  // namespace qfbsde
