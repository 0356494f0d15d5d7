#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lhy {

inline constexpr double pi = std::numbers::pi;

// Thrown when an input violates a documented invariant (negative potential,
// non-positive log argument, regime violations).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid user configuration: exit code 1 in the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical procedure did not reach its own accuracy target.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two routes to the same quantity disagree.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Tag>
struct Strong {
  double value{};
  constexpr Strong() = default;
  explicit constexpr Strong(double v) : value(v) {}
  constexpr auto operator<=>(const Strong&) const = default;
};

using Length = Strong<struct LengthTag>;
using Wavenumber = Strong<struct WavenumberTag>;

// Neumaier variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_total(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};
GaussRule gauss_legendre(int n);

}  // namespace lhy
