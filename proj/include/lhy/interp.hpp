#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace lhy {

// Lagrange interpolation through P nodes at integer positions 0..P-1,
// evaluated at u (barycentric form). at(k) returns the k-th node value.
template <int P, class At>
double lagrange_nodes(double u, At&& at) {
  static constexpr std::array<double, P> weights = [] {
    std::array<double, P> w{};
    for (int k = 0; k < P; ++k) {
      double d = 1.0;
      for (int m = 0; m < P; ++m)
        if (m != k) d *= static_cast<double>(k - m);
      w[k] = 1.0 / d;
    }
    return w;
  }();
  for (int k = 0; k < P; ++k)
    if (u == static_cast<double>(k)) return at(k);
  double num = 0.0, den = 0.0;
  for (int k = 0; k < P; ++k) {
    const double c = weights[k] / (u - static_cast<double>(k));
    num += c * at(k);
    den += c;
  }
  return num / den;
}

// Uniformly sampled function y[i] = f(i h), i = 0..n-1, evaluated with a
// centred P-point Lagrange stencil. Even functions fold negative indices;
// otherwise the stencil is clamped inside the table.
template <int P>
class UniformSampled {
 public:
  UniformSampled() = default;
  UniformSampled(double h, std::vector<double> y, bool even)
      : h_(h), y_(std::move(y)), even_(even) {}

  double operator()(double x) const {
    const double t = x / h_;
    const long n = static_cast<long>(y_.size());
    long j = static_cast<long>(std::floor(t)) - (P / 2 - 1);
    if (even_) {
      if (j + P - 1 >= n) j = n - P;
      return lagrange_nodes<P>(t - static_cast<double>(j), [&](int k) {
        long i = j + k;
        if (i < 0) i = -i;
        return y_[static_cast<std::size_t>(i)];
      });
    }
    if (j < 0) j = 0;
    if (j + P - 1 >= n) j = n - P;
    return lagrange_nodes<P>(t - static_cast<double>(j),
                             [&](int k) { return y_[static_cast<std::size_t>(j + k)]; });
  }

  double step() const { return h_; }
  double x_max() const { return h_ * static_cast<double>(y_.size() - 1); }
  std::span<const double> samples() const { return y_; }
  bool empty() const { return y_.empty(); }

 private:
  double h_ = 1.0;
  std::vector<double> y_;
  bool even_ = false;
};

}  // namespace lhy
