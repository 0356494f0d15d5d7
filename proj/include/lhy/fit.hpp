#pragma once

#include <span>

namespace lhy {

// Least-squares line through (log x, log |y|).
struct PowerFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
  int points = 0;
};

PowerFit fit_loglog(std::span<const double> x, std::span<const double> y);

// |measured - target| <= max(tol, 2 stderr)
bool exponent_matches(const PowerFit& f, double target, double tol);
// measured <= bound + max(tol, 2 stderr)
bool exponent_at_most(const PowerFit& f, double bound, double tol);

}  // namespace lhy
