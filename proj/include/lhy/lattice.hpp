#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lhy/common.hpp"

namespace lhy {

// r3(n) for 0 <= n <= max_n, shells of the momentum lattice 2 pi Z^3.
class ShellTable {
 public:
  static ShellTable enumerate(std::int64_t max_n);

  std::int64_t max_n() const { return static_cast<std::int64_t>(r3_.size()) - 1; }
  std::uint32_t multiplicity(std::int64_t n) const { return r3_[static_cast<std::size_t>(n)]; }
  static double radius(std::int64_t n) { return 2.0 * pi * std::sqrt(static_cast<double>(n)); }
  // Shells with r3(n) > 0, ascending.
  const std::vector<std::int64_t>& occupied() const { return occupied_; }
  std::int64_t point_count() const;

 private:
  std::vector<std::uint32_t> r3_;
  std::vector<std::int64_t> occupied_;
};

using SharedShells = std::shared_ptr<const ShellTable>;

// Legendre: n is a sum of three squares unless n = 4^a (8b + 7).
bool is_three_square_excluded(std::int64_t n);

// Summand bounded by c |p|^-s beyond the cutoff.
struct TailModel {
  double c;
  double s;
};

struct TailEstimate {
  double cutoff_norm = 0.0;
  double tail_bound = 0.0;
  double decay_exponent_used = 0.0;
};

// c int_{|p| > P} |p|^-s d^3p / (2 pi)^3; throws DomainError for s <= 3.
TailEstimate power_tail(const TailModel& model, double P);

struct LatticeSum {
  double sum = 0.0;
  double tail_correction = 0.0;
  TailEstimate tail;
  double total() const { return sum + tail_correction; }
};

using ShellSummand = std::function<double(std::int64_t n, double p)>;

// Compensated sum of r3(n) * summand(n, |p|) over all shells 0..max_n.
// Shells are reduced in fixed-size chunks and the chunks combined in order,
// so the result does not depend on the worker count.
LatticeSum radial_lattice_sum(const ShellSummand& summand, const ShellTable& shells,
                              std::optional<TailModel> tail = std::nullopt);

// Same reduction over precomputed per-shell values v[n] (index = shell).
double shell_reduce(std::span<const double> per_shell, const ShellTable& shells);

// int_{|p| > P} f(|p|) d^3p/(2 pi)^3 for a radial f, by Gauss-Legendre panels
// up to P_end and a c|p|^-s power-law remainder whose envelope c is a
// windowed mean of f |p|^s over the last quarter before P_end.
double continuum_tail(const std::function<double(double)>& f, double P, double P_end, double panel,
                      double s_remainder);

// Default momentum truncation max(20 sqrt(8 pi a) N^{kappa/2}, 2 pi 40), as a shell index.
std::int64_t default_max_shell(double a, double N, double kappa);

}  // namespace lhy
