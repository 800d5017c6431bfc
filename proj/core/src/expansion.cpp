#include "qfbsde/expansion.hpp"

#include <cmath>
#include <string>

namespace qfbsde {
namespace {

constexpr std::array<TermInfo, kTermCount> kVInfo{{
    {"V00", 0, 0, 1.0},
    {"V02", 0, 2, 1.0 / 2.0},
    {"V11", 1, 1, 1.0},
    {"V12", 1, 2, 1.0 / 2.0},
    {"V13", 1, 3, 1.0 / 6.0},
    {"V22", 2, 2, 1.0 / 2.0},
    {"V23", 2, 3, 1.0 / 6.0},
    {"V33", 3, 3, 1.0 / 6.0},
}};

constexpr std::array<TermInfo, kTermCount> kZInfo{{
    {"Z01", 0, 1, 1.0},
    {"Z03", 0, 3, 1.0 / 6.0},
    {"Z12", 1, 2, 1.0 / 2.0},
    {"Z13", 1, 3, 1.0 / 6.0},
    {"Z14", 1, 4, 1.0 / 24.0},
    {"Z23", 2, 3, 1.0 / 6.0},
    {"Z24", 2, 4, 1.0 / 24.0},
    {"Z34", 3, 4, 1.0 / 24.0},
}};

// Below this s the tail is summed directly; above it log1p(r) minus the head
// loses at most a factor ~30 to cancellation.
constexpr double kSeriesCutoff = 0.6;

void check_variance(double x_t) {
  if (!(x_t >= kMinVariance)) {
    throw DomainError("x_t = " + std::to_string(x_t) + " is below the minimum variance " +
                      std::to_string(kMinVariance));
  }
}

// Shared subexpressions of the closed forms at horizon tau = T - t.
struct Horizon {
  double y;        // Y_tT
  double one_m_y;  // 1 - Y_tT
  double x0_T;     // X_T^(0)
};

Horizon horizon(const MarketState& state, const ModelParams& p) {
  const double tau = state.remaining();
  Horizon h;
  h.y = std::exp(-p.k * tau);
  h.one_m_y = -std::expm1(-p.k * tau);
  h.x0_T = h.y * state.x_t + p.m * h.one_m_y;
  return h;
}

template <std::size_t N>
double weighted_sum(const std::array<double, N>& values, const std::array<TermInfo, N>& meta,
                    int max_eps) noexcept {
  double total = 0.0;
  for (int eps = 0; eps <= max_eps; ++eps) {
    double group = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (meta[i].eps_index == eps) group += meta[i].weight * values[i];
    }
    total += group;
  }
  return total;
}

}  // namespace

const TermInfo& info(VTerm term) noexcept { return kVInfo[static_cast<std::size_t>(term)]; }
const TermInfo& info(ZTerm term) noexcept { return kZInfo[static_cast<std::size_t>(term)]; }

ExpansionOrder::ExpansionOrder(int eps_order) : eps_order_(eps_order) {
  if (eps_order < 0 || eps_order > kMax) {
    throw ConfigError("expansion order must be in 0.." + std::to_string(kMax) + ", got " +
                      std::to_string(eps_order));
  }
}

double y_factor(double t, double u, double k) {
  if (!(u >= t)) throw DomainError("y_factor requires u >= t");
  return std::exp(-k * (u - t));
}

double x_mean(const MarketState& state, double u, const ValidatedParams& params) {
  const double y = y_factor(state.t, u, params->k);
  const double one_m_y = -std::expm1(-params->k * (u - state.t));
  return y * state.x_t + params->m * one_m_y;
}

double d2_moment(const MarketState& state, double u, const ValidatedParams& params) {
  const ModelParams& p = params.get();
  const double y = y_factor(state.t, u, p.k);
  const double one_m_y = -std::expm1(-p.k * (u - state.t));
  return p.c * p.c / (2.0 * p.k) * one_m_y * (one_m_y * p.m + 2.0 * y * state.x_t);
}

namespace detail {

double log_tail(int p, double s, double r) noexcept {
  if (s <= 0.0) return 0.0;
  if (s < kSeriesCutoff) {
    double power = std::pow(s, p);
    double total = 0.0;
    for (int n = p; n < p + 400; ++n) {
      const double term = power / n;
      total += term;
      if (term <= 1e-17 * total) break;
      power *= s;
    }
    return total;
  }
  double head = 0.0;
  double power = 1.0;
  for (int n = 1; n < p; ++n) {
    power *= s;
    head += power / n;
  }
  return std::log1p(r) - head;
}

}  // namespace detail

std::array<double, kTermCount> v_terms(const MarketState& state, const ValidatedParams& params) {
  check_variance(state.x_t);
  const ModelParams& p = params.get();
  const double tau = state.remaining();

  // r = m (e^{k tau} - 1) / x_t, s = r / (1 + r) = m (1 - Y) / X_T^(0).
  const double r = p.m * std::expm1(p.k * tau) / state.x_t;
  const double s = std::isinf(r) ? 1.0 : r / (1.0 + r);
  const double t1 = detail::log_tail(1, s, r);
  const double t2 = detail::log_tail(2, s, r);
  const double t3 = detail::log_tail(3, s, r);
  const double t4 = detail::log_tail(4, s, r);

  const double mu = p.mu, k = p.k, m = p.m, c = p.c, rho = p.rho, g = p.gamma;
  const double mu2 = mu * mu, mu3 = mu2 * mu, mu4 = mu3 * mu, mu5 = mu4 * mu;
  const double c2 = c * c, c3 = c2 * c;
  const double k2 = k * k, k3 = k2 * k, k4 = k3 * k;
  const double m2 = m * m, m3 = m2 * m, m4 = m3 * m;
  const double one_m_rho2 = 1.0 - rho * rho;

  std::array<double, kTermCount> v{};
  auto at = [&v](VTerm t) -> double& { return v[static_cast<std::size_t>(t)]; };

  at(VTerm::V00) = mu2 / (2.0 * g * k * m) * t1;
  at(VTerm::V02) = mu2 * c2 / (2.0 * g * k2 * m2) * (s * s + t3);
  at(VTerm::V11) = rho * mu3 * c / (2.0 * g * k2 * m2) * t2;
  at(VTerm::V12) = -one_m_rho2 * mu4 * c2 / (4.0 * g * k3 * m3) * t3;
  at(VTerm::V13) = 3.0 * rho * mu3 * c3 / (2.0 * g * k3 * m3) * (s * s * s + 2.0 * t3);
  at(VTerm::V22) = rho * rho * mu4 * c2 / (g * k3 * m3) * t3;
  at(VTerm::V23) = -rho * one_m_rho2 * 9.0 * mu5 * c3 / (4.0 * g * k4 * m4) * t4;
  at(VTerm::V33) = 3.0 * rho * rho * rho * mu5 * c3 / (g * k4 * m4) * t4;
  return v;
}

std::array<double, kTermCount> z_terms(const MarketState& state, const ValidatedParams& params) {
  check_variance(state.x_t);
  const ModelParams& p = params.get();
  const Horizon h = horizon(state, p);

  const double mu = p.mu, k = p.k, m = p.m, c = p.c, rho = p.rho, g = p.gamma;
  const double mu2 = mu * mu, mu3 = mu2 * mu, mu4 = mu3 * mu, mu5 = mu4 * mu;
  const double c2 = c * c, c3 = c2 * c, c4 = c3 * c;
  const double k2 = k * k, k3 = k2 * k, k4 = k3 * k;
  const double one_m_rho2 = 1.0 - rho * rho;

  const double sqrt_x = std::sqrt(state.x_t);
  const double w = h.one_m_y;
  const double yx = h.y * state.x_t;
  const double X = h.x0_T;
  const double X2 = X * X, X3 = X2 * X, X4 = X3 * X;
  const double w2 = w * w, w3 = w2 * w, w4 = w3 * w;

  std::array<double, kTermCount> z{};
  auto at = [&z](ZTerm t) -> double& { return z[static_cast<std::size_t>(t)]; };

  at(ZTerm::Z01) = -mu2 * c / (2.0 * g * k) * w / (sqrt_x * X);
  at(ZTerm::Z03) = -3.0 * mu2 * c3 / (2.0 * g * k2) * w2 / (sqrt_x * X3) * (m * w + 2.0 * yx);
  at(ZTerm::Z12) = -rho * mu3 * c2 / (g * k2) * w2 / (sqrt_x * X2);
  at(ZTerm::Z13) = one_m_rho2 * 3.0 * mu4 * c3 / (4.0 * g * k3) * w3 / (sqrt_x * X3);
  at(ZTerm::Z14) =
      -6.0 * rho * mu3 * c4 / (g * k3) * w3 * (2.0 * m * w + 5.0 * yx) / (sqrt_x * X4);
  at(ZTerm::Z23) = -3.0 * rho * rho * mu4 * c3 / (g * k3) * w3 / (sqrt_x * X3);
  at(ZTerm::Z24) = rho * one_m_rho2 * 9.0 * mu5 * c4 / (g * k4) * w4 / (sqrt_x * X4);
  at(ZTerm::Z34) = -12.0 * rho * rho * rho * mu5 * c4 / (g * k4) * w4 / (sqrt_x * X4);
  return z;
}

TermTable term_table(const MarketState& state, const ValidatedParams& params) {
  return TermTable{v_terms(state, params), z_terms(state, params)};
}

double sum_v(const TermTable& terms, ExpansionOrder order) noexcept {
  return weighted_sum(terms.v, kVInfo, order.value());
}

double sum_z(const TermTable& terms, ExpansionOrder order) noexcept {
  return weighted_sum(terms.z, kZInfo, order.value());
}

ExpansionResult expand(const MarketState& state, const ValidatedParams& params,
                       ExpansionOrder order) {
  ExpansionResult result;
  result.terms = term_table(state, params);
  result.order = order;
  result.v = sum_v(result.terms, order);
  result.z = sum_z(result.terms, order);
  return result;
}

double optimal_weight(double x_t, double z, const ValidatedParams& params) {
  const ModelParams& p = params.get();
  return (p.mu - p.gamma * p.rho * std::sqrt(x_t) * z) / (p.gamma * x_t);
}

double mean_variance_weight(double x_t, const ValidatedParams& params) {
  return params->mu / (params->gamma * x_t);
}

}  // namespace qfbsde
