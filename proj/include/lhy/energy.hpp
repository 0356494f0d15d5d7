#pragma once

#include <memory>
#include <optional>

#include "lhy/cubic.hpp"
#include "lhy/kernels.hpp"

namespace lhy {

// 512 sqrt(pi) / 15
inline const double lhy_coefficient = 512.0 * std::sqrt(pi) / 15.0;

// sqrt(x^2 + 2 x s) - x - s + s^2 / (2 x) for x = p^2 > 0, written without
// cancellation; switches to the Taylor series in s / x below 1e-4.
double bogoliubov_summand(double x, double s);

// S = 1/2 sum_{p != 0} summand(p^2, N^k (Vf)^(p/L)), tail corrected.
double bogoliubov_sum(const KernelSet& k);
// S_a: the same sum with (Vf)^ replaced by 8 pi a.
double simplified_sum_Sa(const KernelSet& k);

struct LhyIntegral {
  double J = 0.0;             // int_0^inf q^2 (sqrt(q^4 + 2 q^2) - q^2 - 1 + 1/(2 q^2)) dq
  double J_closed = 0.0;      // 8 sqrt(2) / 15
  double J_error = 0.0;       // quadrature error estimate
  double quadrature = 0.0;    // the full momentum integral
  double closed_form = 0.0;   // 512 sqrt(pi)/15 a^{5/2} s^{5/2}
  double relative_gap = 0.0;  // |quadrature - closed_form| / closed_form
};

// Throws ConvergenceError when the adaptive quadrature misses its tolerance.
LhyIntegral lhy_integral_check(double a, double s_scale);

double lhy_closed(double a, double N, double kappa);

struct ConstantCorrections {
  double sigma2 = 0.0;      // -N^k |sigma|_2^2 / N * sum V^ eta_inf
  double eta_sigma = 0.0;   // -N^{k-1} sum_{p,r} V^(r/L) eta_inf(p+r) sigma(p)^2
};

// Both corrections reuse the radial sums and the position integral already
// carried by the cubic terms (they are the same lattice sums with opposite
// sign).
ConstantCorrections constant_corrections(const CubicTerms& c);

enum class Variant { minus, plus };

struct ParticleSchedule {
  std::int64_t N0 = 0;
  double sigma_mass = 0.0;  // sum_p sigma_p^2
  double window = 0.0;      // N^{3k/2 - e}
  double slack = 0.0;       // N^{3k/2 - 5e}
  Variant variant = Variant::minus;
  // N0 + sigma_mass - N, signed
  double offset(double N) const { return static_cast<double>(N0) + sigma_mass - N; }
  // expected count sits on the correct side of N by at least window - slack
  bool ordering_ok(double N) const;
};

// Throws DomainError when sum sigma^2 >= N.
ParticleSchedule particle_schedule(const KernelSet& k, Variant v);

struct EnergyBreakdown {
  double N = 0.0, kappa = 0.0, a = 0.0;
  double leading = 0.0;  // 4 pi a N^{1+k}
  double bogoliubov_sum_S = 0.0;
  double correction_sigma2 = 0.0;
  double correction_eta_sigma = 0.0;
  double cubic_main = 0.0;
  double total = 0.0;
  double lhy_closed = 0.0;
  double S_a = 0.0;
  CubicTerms cubic;
  ParticleSchedule schedule;

  double scale() const;              // a^{5/2} N^{5k/2}
  double scaled_excess() const;      // (total - leading) / scale
  double assembly_defect() const;    // |total - sum of parts| / |total|
};

EnergyBreakdown assemble_energy(const KernelSet& k, const CubicTerms& cubic, const ParticleSchedule& schedule);

// Builds the kernel set, torus kernels and cubic terms for one N.
EnergyBreakdown evaluate_energy(const KernelParams& params, std::shared_ptr<const Scattering> scat,
                                std::optional<std::int64_t> max_shell = std::nullopt,
                                const CubicOptions& copt = {});

struct DensityReport {
  double rho = 0.0;
  double rho_a3 = 0.0;
  double N = 0.0;
  double L = 0.0;
  double kappa = 0.0;
  double gamma = 0.0;
  double e_over_4pi_a_rho2 = 0.0;
  double lhy_fraction = 0.0;            // measured e/(4 pi a rho^2) - 1
  double lhy_fraction_predicted = 0.0;  // 128/(15 sqrt(pi)) sqrt(rho a^3)
};

// Predicted fraction only.
double lhy_fraction_predicted(double rho_a3);

// Maps rho to the box N with rho = N / L^3, L = N^{1-k}, in the units of the
// potential, and evaluates the energy density e = total / L^5 there.
// Throws DomainError for a = 0 or rho a^3 >= 1e-2.
DensityReport density_report(double rho, const KernelParams& base, std::shared_ptr<const Scattering> scat,
                             std::optional<std::int64_t> max_shell = std::nullopt);

struct ExponentSchedule {
  double kappa = 0.0, epsilon = 0.0, delta = 0.0;
  double ell_sigma_exponent = 0.0;  // ell = N^{exponent}
  double ell_eta_exponent = 0.0;
  double ell_B_exponent = 0.0;
  int n_delta = 0;
  double exponent_mu_V = 0.0;
  double exponent_mu_K = 0.0;
  double gamma = 0.0;
  double kappa_from_gamma = 0.0;
  double epsilon_bound = 0.0;
  double delta_bound = 0.0;
  bool kappa_ok = false, epsilon_ok = false, delta_ok = false, mu_V_ok = false, mu_K_ok = false;
  bool valid() const { return kappa_ok && epsilon_ok && delta_ok && mu_V_ok && mu_K_ok; }
};

ExponentSchedule exponent_schedule(double kappa, double epsilon, double delta);

double gamma_from_kappa(double kappa);  // (1 - k)/(2 - 3k)
double kappa_from_gamma(double gamma);  // (2 g - 1)/(3 g - 1)

// gamma as an exact integer fraction. A double kappa is m 2^-D, so
// gamma = (2^D - m)/(2^{D+1} - 3m) and the inverse returns m / 2^D bit for bit.
struct GammaFraction {
  __int128 num = 0;
  __int128 den = 1;
  double value() const;
};
// Throws DomainError outside (0, 2/3) or below 2^-60.
GammaFraction gamma_fraction(double kappa);
double kappa_from_gamma(const GammaFraction& g);

}  // namespace lhy
