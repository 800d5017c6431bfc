#include "qfbsde/xoracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "parallel.hpp"
#include "qfbsde/colehopf.hpp"
#include "qfbsde/expansion.hpp"
#include "qfbsde/random.hpp"

namespace qfbsde {
namespace {

constexpr std::size_t kMoments = 6;  // D, E, F, D^2, D^3, D*E

struct State {
  double d = 0.0, e = 0.0, f = 0.0;
};

// Advances (D, E, F) by one Euler step using X0 at the left grid point.
inline State euler_step(const State& s, double x0, double k, double c, double dt, double db) {
  const double root = std::sqrt(x0);
  const double inv_root = 1.0 / root;
  State n;
  n.d = s.d - k * s.d * dt + c * root * db;
  n.e = s.e - k * s.e * dt + c * inv_root * s.d * db;
  n.f = s.f - k * s.f * dt + 1.5 * c * (inv_root * s.e - 0.5 * inv_root / x0 * s.d * s.d) * db;
  return n;
}

struct Accumulator {
  std::array<double, kMoments> sum{}, sum_sq{};
  std::size_t n = 0;

  void add(const State& s) {
    const std::array<double, kMoments> v{s.d, s.e, s.f, s.d * s.d, s.d * s.d * s.d, s.d * s.e};
    for (std::size_t i = 0; i < kMoments; ++i) {
      sum[i] += v[i];
      sum_sq[i] += v[i] * v[i];
    }
    ++n;
  }

  Accumulator& operator+=(const Accumulator& o) {
    for (std::size_t i = 0; i < kMoments; ++i) {
      sum[i] += o.sum[i];
      sum_sq[i] += o.sum_sq[i];
    }
    n += o.n;
    return *this;
  }

  MomentReport report(double time) const {
    MomentReport r;
    r.time = time;
    r.n_paths = n;
    std::array<MomentEstimate, kMoments> est{};
    const double N = static_cast<double>(n);
    for (std::size_t i = 0; i < kMoments && n > 0; ++i) {
      est[i].mean = sum[i] / N;
      if (n > 1) {
        const double var = std::max(0.0, (sum_sq[i] - N * est[i].mean * est[i].mean) / (N - 1));
        est[i].std_err = std::sqrt(var / N);
      }
    }
    r.d = est[0], r.e = est[1], r.f = est[2], r.d2 = est[3], r.d3 = est[4], r.de = est[5];
    return r;
  }
};

std::vector<double> x0_on_grid(const ValidatedParams& params, double x_t, std::size_t steps,
                               double dt) {
  const MarketState state{0.0, steps * dt, x_t};
  std::vector<double> x0(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) x0[i] = x_mean(state, i * dt, params);
  return x0;
}

}  // namespace

ExpansionPathBundle simulate_def(const ValidatedParams& params, double x_t, double horizon,
                                 double dt, std::uint64_t seed, std::uint64_t path,
                                 bool negate_noise) {
  if (!(x_t > 0.0)) throw ConfigError("x_t must be positive");
  const std::size_t steps = step_count(horizon, dt);
  ExpansionPathBundle b;
  b.x0_path = x0_on_grid(params, x_t, steps, dt);
  b.grid.resize(steps + 1);
  b.d_path.assign(steps + 1, 0.0);
  b.e_path.assign(steps + 1, 0.0);
  b.f_path.assign(steps + 1, 0.0);

  NormalStream normals(seed, path);
  const double sqrt_dt = std::sqrt(dt);
  const double sign = negate_noise ? -1.0 : 1.0;
  State s;
  for (std::size_t i = 0; i <= steps; ++i) b.grid[i] = i * dt;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double db = sign * sqrt_dt * normals.next();
    s = euler_step(s, b.x0_path[i - 1], params->k, params->c, dt, db);
    b.d_path[i] = s.d;
    b.e_path[i] = s.e;
    b.f_path[i] = s.f;
  }
  return b;
}

MomentReport moment_estimates(std::span<const ExpansionPathBundle> ensemble) {
  Accumulator acc;
  double time = 0.0;
  for (const auto& b : ensemble) {
    if (b.d_path.empty()) continue;
    acc.add({b.d_path.back(), b.e_path.back(), b.f_path.back()});
    time = b.grid.back();
  }
  return acc.report(time);
}

std::vector<MomentReport> run_moment_oracle(const ValidatedParams& params, double x_t,
                                            const OracleConfig& cfg) {
  if (cfg.n_paths < 1) throw ConfigError("n_paths must be at least 1");
  if (!(x_t > 0.0)) throw ConfigError("x_t must be positive");
  const std::size_t steps = step_count(cfg.horizon, cfg.dt);
  const std::vector<double> x0 = x0_on_grid(params, x_t, steps, cfg.dt);
  const std::size_t points = cfg.all_grid_points ? steps + 1 : 1;

  const std::size_t chunk = std::max<std::size_t>(1, cfg.chunk_size);
  const std::size_t n_chunks = (cfg.n_paths + chunk - 1) / chunk;
  std::vector<std::vector<Accumulator>> partial(n_chunks, std::vector<Accumulator>(points));
  const double sqrt_dt = std::sqrt(cfg.dt);
  const double k = params->k, c = params->c;

  detail::for_each_chunk(n_chunks, cfg.threads, [&](std::size_t ci) {
    auto& acc = partial[ci];
    const std::uint64_t begin = ci * chunk;
    const std::uint64_t end = std::min<std::uint64_t>(cfg.n_paths, begin + chunk);
    for (std::uint64_t path = begin; path < end; ++path) {
      NormalStream normals(cfg.seed, path);
      State s;
      if (cfg.all_grid_points) acc[0].add(s);
      for (std::size_t i = 1; i <= steps; ++i) {
        s = euler_step(s, x0[i - 1], k, c, cfg.dt, sqrt_dt * normals.next());
        if (cfg.all_grid_points) acc[i].add(s);
      }
      if (!cfg.all_grid_points) acc[0].add(s);
    }
  });

  std::vector<MomentReport> reports;
  reports.reserve(points);
  for (std::size_t p = 0; p < points; ++p) {
    Accumulator total;
    for (const auto& chunk_acc : partial) total += chunk_acc[p];
    const double time = cfg.all_grid_points ? p * cfg.dt : steps * cfg.dt;
    reports.push_back(total.report(time));
  }
  return reports;
}

std::vector<OracleCheck> check_moments(const MomentReport& report, const ValidatedParams& params,
                                       double x_t, double sigmas) {
  const MarketState state{0.0, report.time, x_t};
  const double d2_target = d2_moment(state, report.time, params);
  const auto make = [sigmas](std::string name, const MomentEstimate& m, double target) {
    OracleCheck c{std::move(name), m.mean, m.std_err, target, false};
    c.passed = std::abs(m.mean - target) <= sigmas * m.std_err;
    return c;
  };
  return {
      make("E[D]", report.d, 0.0),     make("E[E]", report.e, 0.0),
      make("E[F]", report.f, 0.0),     make("E[D^2]", report.d2, d2_target),
      make("E[D^3]", report.d3, 0.0),  make("E[D*E]", report.de, 0.0),
  };
}

}  // namespace qfbsde
