#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qfbsde {

/// Market and preference constants. All fields are decimals (0.0625, not 6.25).
struct ModelParams {
  double mu = 0.0;     // drift of the risky asset
  double k = 0.0;      // mean-reversion speed of the variance
  double m = 0.0;      // long-run variance
  double c = 0.0;      // vol-of-vol
  double rho = 0.0;    // correlation between asset and variance noise
  double gamma = 0.0;  // absolute risk aversion

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Raised when parameters or states break their invariants. `violations()`
/// names every failed check, not just the first one.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Input outside the domain where a closed form is defined (e.g. x_t ~ 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inconsistent Monte Carlo or run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// ModelParams that passed `validate`. Only `validate` can build one.
class ValidatedParams {
 public:
  const ModelParams& get() const noexcept { return params_; }
  const ModelParams* operator->() const noexcept { return &params_; }
  const ModelParams& operator*() const noexcept { return params_; }

  /// Non-fatal findings, currently only a Feller-condition report (2km <= c^2).
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  friend bool operator==(const ValidatedParams& a, const ValidatedParams& b) {
    return a.params_ == b.params_;
  }

 private:
  friend ValidatedParams validate(const ModelParams&);
  ValidatedParams(ModelParams p, std::vector<std::string> w)
      : params_(p), warnings_(std::move(w)) {}

  ModelParams params_;
  std::vector<std::string> warnings_;
};

/// Checks k > 0, m > 0, c >= 0, gamma > 0, mu > 0, |rho| < 1 and finiteness.
/// Throws ValidationError listing each violated invariant.
ValidatedParams validate(const ModelParams& params);

/// Idempotent: an already validated set is returned unchanged.
inline ValidatedParams validate(const ValidatedParams& params) { return params; }

/// Evaluation point of the backward component.
struct MarketState {
  double t = 0.0;    // current time
  double T = 0.0;    // terminal time
  double x_t = 0.0;  // current variance

  double remaining() const noexcept { return T - t; }
};

/// Throws ValidationError unless 0 <= t <= T and x_t > 0.
MarketState make_state(double t, double T, double x_t);

/// Parameters of a square-root variance process dX = k(mean - X)dt + c sqrt(X) dB.
struct VarianceDynamics {
  double k = 0.0;
  double mean = 0.0;
  double c = 0.0;

  /// k * mean >= c^2 / 4: the implicit Milstein numerator stays positive.
  bool milstein_positive() const noexcept { return k * mean >= 0.25 * c * c; }
};

/// Long-run mean of the variance after the change of measure that linearises
/// the backward equation: n = m - rho * mu * c / k.
struct AdjustedParams {
  double n = 0.0;
  double k = 0.0;
  double c = 0.0;
  bool scheme_positive = false;  // k * n >= c^2 / 4

  VarianceDynamics dynamics() const noexcept { return {k, n, c}; }
};

AdjustedParams adjusted_mean(const ValidatedParams& params);

/// Variance dynamics under the original measure (long-run mean m).
VarianceDynamics original_dynamics(const ValidatedParams& params);

}  // namespace qfbsde
