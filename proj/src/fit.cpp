#include "lhy/fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lhy/common.hpp"

namespace lhy {

PowerFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("power fit needs >= 2 matching points");
  const auto n = static_cast<double>(x.size());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(std::abs(y[i]) > 0.0)) throw DomainError("power fit needs nonzero values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  PowerFit f;
  f.points = static_cast<int>(x.size());
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double r = ly[i] - f.intercept - f.exponent * lx[i];
      rss += r * r;
    }
    f.stderr_ = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return f;
}

bool exponent_matches(const PowerFit& f, double target, double tol) {
  return std::abs(f.exponent - target) <= std::max(tol, 2.0 * f.stderr_);
}

bool exponent_at_most(const PowerFit& f, double bound, double tol) {
  return f.exponent <= bound + std::max(tol, 2.0 * f.stderr_);
}

}  // namespace lhy
