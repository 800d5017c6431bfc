#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "qfbsde/model.hpp"

// Closed-form asymptotic expansion of the quadratic FBSDE
//
//   dV = -f(Z, X) dt + Z dB,  V_T = 0,
//   f(z, x) = -(gamma/2)(1 - rho^2) z^2 - (mu rho / sqrt(x)) z + mu^2 / (2 gamma x),
//   dX = k(m - X) dt + c sqrt(X) dB,
//
// in the driver order (eps) and the vol-of-vol order (delta). Term (i, j)
// carries eps-index i and is proportional to c^j. Sums use eps = delta = 1.

namespace qfbsde {

/// Smallest variance at which the closed forms are evaluated (they carry 1/sqrt(x)).
inline constexpr double kMinVariance = 1e-12;

enum class VTerm : std::size_t { V00, V02, V11, V12, V13, V22, V23, V33 };
enum class ZTerm : std::size_t { Z01, Z03, Z12, Z13, Z14, Z23, Z24, Z34 };

inline constexpr std::size_t kTermCount = 8;

struct TermInfo {
  std::string_view label;
  int eps_index;    // perturbative order i
  int delta_index;  // power of c, j
  double weight;    // 1 / j! in the delta = 1 sum
};

const TermInfo& info(VTerm term) noexcept;
const TermInfo& info(ZTerm term) noexcept;

/// The eight level terms and eight diffusion terms of the expansion, unweighted.
struct TermTable {
  std::array<double, kTermCount> v{};
  std::array<double, kTermCount> z{};

  double operator[](VTerm t) const noexcept { return v[static_cast<std::size_t>(t)]; }
  double operator[](ZTerm t) const noexcept { return z[static_cast<std::size_t>(t)]; }
  double& operator[](VTerm t) noexcept { return v[static_cast<std::size_t>(t)]; }
  double& operator[](ZTerm t) noexcept { return z[static_cast<std::size_t>(t)]; }
};

/// Truncation index in eps, 0..3. Order 3 already contains every term: all
/// eps-orders >= 4 vanish at the implemented delta-orders.
class ExpansionOrder {
 public:
  static constexpr int kMax = 3;
  explicit ExpansionOrder(int eps_order);
  int value() const noexcept { return eps_order_; }

  friend bool operator==(ExpansionOrder, ExpansionOrder) = default;

 private:
  int eps_order_;
};

struct ExpansionResult {
  double v = 0.0;
  double z = 0.0;
  TermTable terms;
  ExpansionOrder order{ExpansionOrder::kMax};
};

/// exp(-k (u - t)). Throws DomainError when u < t.
double y_factor(double t, double u, double k);

/// Deterministic zeroth-order variance X_u^(0) = Y x_t + m (1 - Y).
double x_mean(const MarketState& state, double u, const ValidatedParams& params);

/// E[D_tu^2 | F_t] for the first delta-derivative process D.
double d2_moment(const MarketState& state, double u, const ValidatedParams& params);

/// Level terms V^(i,j) at (x_t, t, T). Throws DomainError if x_t < kMinVariance.
///
/// With s = m (1 - Y_tT) / X_T^(0) in [0, 1) every term is a polynomial in s
/// plus a tail of the series -ln(1 - s) = sum_n s^n / n. That form is
/// algebraically identical to the usual rational-plus-log expressions and
/// avoids their cancellation when (T - t) k is small.
std::array<double, kTermCount> v_terms(const MarketState& state, const ValidatedParams& params);

/// Diffusion terms Z^(i,j) at (x_t, t, T). Throws DomainError if x_t < kMinVariance.
std::array<double, kTermCount> z_terms(const MarketState& state, const ValidatedParams& params);

TermTable term_table(const MarketState& state, const ValidatedParams& params);

/// eps-order-k partial sum: every level term with eps-index <= k, weighted 1/j!.
double sum_v(const TermTable& terms, ExpansionOrder order) noexcept;

/// eps-order-k partial sum of the diffusion terms, weighted 1/j!.
double sum_z(const TermTable& terms, ExpansionOrder order) noexcept;

ExpansionResult expand(const MarketState& state, const ValidatedParams& params,
                       ExpansionOrder order);

/// Optimal amount invested in the risky asset, (mu - gamma rho sqrt(x) z) / (gamma x).
double optimal_weight(double x_t, double z, const ValidatedParams& params);

/// Myopic mean-variance amount mu / (gamma x).
double mean_variance_weight(double x_t, const ValidatedParams& params);

namespace detail {

/// sum_{n >= p} s^n / n for 0 <= s < 1, given also r = s / (1 - s) so that
/// -ln(1 - s) = log1p(r) stays accurate as s -> 1.
double log_tail(int p, double s, double r) noexcept;

}  // namespace detail

}  // namespace qfbsde
