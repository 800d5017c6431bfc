#include "qfbsde/model.hpp"

#include <cmath>
#include <sstream>

namespace qfbsde {
namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += "; ";
    out += item;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::invalid_argument("invalid parameters: " + join(violations)),
      violations_(std::move(violations)) {}

ValidatedParams validate(const ModelParams& p) {
  std::vector<std::string> bad;
  const auto finite = [&](double v, const char* name) {
    if (!std::isfinite(v)) {
      bad.push_back(std::string(name) + " must be finite");
      return false;
    }
    return true;
  };

  if (finite(p.mu, "mu") && !(p.mu > 0.0)) bad.emplace_back("mu must be positive");
  if (finite(p.k, "k") && !(p.k > 0.0)) bad.emplace_back("k must be positive");
  if (finite(p.m, "m") && !(p.m > 0.0)) bad.emplace_back("m must be positive");
  if (finite(p.c, "c") && !(p.c >= 0.0)) bad.emplace_back("c must be non-negative");
  if (finite(p.rho, "rho") && !(std::abs(p.rho) < 1.0))
    bad.emplace_back("rho out of open interval (-1, 1)");
  if (finite(p.gamma, "gamma") && !(p.gamma > 0.0))
    bad.emplace_back("gamma must be positive");

  if (!bad.empty()) throw ValidationError(std::move(bad));

  std::vector<std::string> warnings;
  if (!(2.0 * p.k * p.m > p.c * p.c)) {
    std::ostringstream os;
    os << "Feller condition 2km > c^2 fails (2km = " << 2.0 * p.k * p.m
       << ", c^2 = " << p.c * p.c << ")";
    warnings.push_back(os.str());
  }
  return ValidatedParams(p, std::move(warnings));
}

MarketState make_state(double t, double T, double x_t) {
  std::vector<std::string> bad;
  if (!std::isfinite(t) || !std::isfinite(T) || !(t >= 0.0) || !(t <= T))
    bad.emplace_back("time must satisfy 0 <= t <= T");
  if (!std::isfinite(x_t) || !(x_t > 0.0)) bad.emplace_back("x_t must be positive");
  if (!bad.empty()) throw ValidationError(std::move(bad));
  return MarketState{t, T, x_t};
}

AdjustedParams adjusted_mean(const ValidatedParams& params) {
  const ModelParams& p = params.get();
  AdjustedParams adj;
  adj.k = p.k;
  adj.c = p.c;
  adj.n = p.m - p.rho * p.mu * p.c / p.k;
  adj.scheme_positive = adj.dynamics().milstein_positive();
  return adj;
}

VarianceDynamics original_dynamics(const ValidatedParams& params) {
  return {params->k, params->m, params->c};
}

}  // namespace qfbsde
