#include "lhy/lattice.hpp"

#include <algorithm>

#include "lhy/parallel.hpp"

namespace lhy {

namespace {

constexpr std::size_t kChunk = 8192;

// number of signed permutations of (k1, k2, k3) with k1 >= k2 >= k3 >= 0
std::uint32_t orbit_size(std::int64_t k1, std::int64_t k2, std::int64_t k3) {
  std::uint32_t perms = 6;
  if (k1 == k2 && k2 == k3)
    perms = 1;
  else if (k1 == k2 || k2 == k3)
    perms = 3;
  const int nonzero = (k1 != 0) + (k2 != 0) + (k3 != 0);
  return perms * (1u << nonzero);
}

}  // namespace

ShellTable ShellTable::enumerate(std::int64_t max_n) {
  if (max_n < 0) throw ConfigError("max shell must be non-negative");
  ShellTable t;
  t.r3_.assign(static_cast<std::size_t>(max_n) + 1, 0);
  for (std::int64_t k1 = 0; k1 * k1 <= max_n; ++k1)
    for (std::int64_t k2 = 0; k2 <= k1 && k1 * k1 + k2 * k2 <= max_n; ++k2)
      for (std::int64_t k3 = 0; k3 <= k2; ++k3) {
        const std::int64_t n = k1 * k1 + k2 * k2 + k3 * k3;
        if (n > max_n) break;
        t.r3_[static_cast<std::size_t>(n)] += orbit_size(k1, k2, k3);
      }
  for (std::int64_t n = 0; n <= max_n; ++n)
    if (t.r3_[static_cast<std::size_t>(n)] > 0) t.occupied_.push_back(n);
  return t;
}

std::int64_t ShellTable::point_count() const {
  std::int64_t c = 0;
  for (auto m : r3_) c += m;
  return c;
}

bool is_three_square_excluded(std::int64_t n) {
  if (n <= 0) return false;
  while (n % 4 == 0) n /= 4;
  return n % 8 == 7;
}

TailEstimate power_tail(const TailModel& model, double P) {
  if (!(model.s > 3.0)) throw DomainError("tail exponent s <= 3: lattice sum diverges");
  TailEstimate t;
  t.cutoff_norm = P;
  t.decay_exponent_used = model.s;
  t.tail_bound = std::abs(model.c) * 4.0 * pi * std::pow(P, 3.0 - model.s) / ((model.s - 3.0) * std::pow(2.0 * pi, 3));
  return t;
}

LatticeSum radial_lattice_sum(const ShellSummand& summand, const ShellTable& shells, std::optional<TailModel> tail) {
  const auto& occ = shells.occupied();
  const std::size_t chunks = (occ.size() + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    CompensatedSum s;
    const std::size_t end = std::min(occ.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const std::int64_t n = occ[i];
      s.add(shells.multiplicity(n) * summand(n, ShellTable::radius(n)));
    }
    partial[c] = s.value();
  });
  LatticeSum out;
  out.sum = compensated_total(partial);
  if (tail) {
    // lattice points beyond the last enumerated shell
    out.tail = power_tail(*tail, ShellTable::radius(shells.max_n()));
    out.tail_correction = tail->c >= 0 ? out.tail.tail_bound : -out.tail.tail_bound;
  }
  return out;
}

double shell_reduce(std::span<const double> per_shell, const ShellTable& shells) {
  const auto& occ = shells.occupied();
  const std::size_t chunks = (occ.size() + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  for (std::size_t c = 0; c < chunks; ++c) {
    CompensatedSum s;
    const std::size_t end = std::min(occ.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const auto n = static_cast<std::size_t>(occ[i]);
      if (n < per_shell.size()) s.add(shells.multiplicity(occ[i]) * per_shell[n]);
    }
    partial[c] = s.value();
  }
  return compensated_total(partial);
}

double continuum_tail(const std::function<double(double)>& f, double P, double P_end, double panel,
                      double s_remainder) {
  static const GaussRule g = gauss_legendre(12);
  CompensatedSum s;
  if (P_end > P) {
    const int panels = std::max(1, static_cast<int>(std::ceil((P_end - P) / panel)));
    const double h = (P_end - P) / panels;
    for (int k = 0; k < panels; ++k) {
      const double a = P + k * h;
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double p = a + 0.5 * h * (g.x[i] + 1.0);
        s.add(0.5 * h * g.w[i] * p * p * f(p));
      }
    }
  }
  double total = s.value() * 4.0 * pi / std::pow(2.0 * pi, 3);
  if (s_remainder > 3.0) {
    // envelope c of f ~ c |p|^-s from a Hann-weighted mean over the last
    // quarter, so oscillating summands average out instead of being
    // extrapolated from a single sample
    const double Pe = std::max(P, P_end);
    double c = f(Pe) * std::pow(Pe, s_remainder);
    if (P_end > P) {
      const double Pa = std::max(P, 0.75 * P_end);
      const int panels = std::max(4, static_cast<int>(std::ceil((P_end - Pa) / panel)));
      const double h = (P_end - Pa) / panels;
      CompensatedSum num, den;
      for (int k = 0; k < panels; ++k)
        for (std::size_t i = 0; i < g.x.size(); ++i) {
          const double p = Pa + k * h + 0.5 * h * (g.x[i] + 1.0);
          const double hann = std::pow(std::sin(pi * (p - Pa) / (P_end - Pa)), 2);
          num.add(g.w[i] * hann * f(p) * std::pow(p, s_remainder));
          den.add(g.w[i] * hann);
        }
      c = num.value() / den.value();
    }
    total += c * 4.0 * pi * std::pow(Pe, 3.0 - s_remainder) / ((s_remainder - 3.0) * std::pow(2.0 * pi, 3));
  }
  return total;
}

std::int64_t default_max_shell(double a, double N, double kappa) {
  const double P = std::max(20.0 * std::sqrt(8.0 * pi * a) * std::pow(N, kappa / 2.0), 2.0 * pi * 40.0);
  return static_cast<std::int64_t>(std::floor(std::pow(P / (2.0 * pi), 2)));
}

}  // namespace lhy
