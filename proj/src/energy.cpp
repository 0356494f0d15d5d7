#include "lhy/energy.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <limits>

namespace lhy {

double bogoliubov_summand(double x, double s) {
  if (!(x > 0.0)) throw DomainError("summand needs p^2 > 0");
  const double u = s / x;
  if (std::abs(u) < 1e-4) {
    const double u3 = u * u * u;
    return x * u3 * (0.5 + u * (-0.625 + u * (0.875 - u * 1.3125)));
  }
  const double rad = x * x + 2.0 * x * s;
  if (rad < 0.0) throw DomainError("negative radicand p^4 + 2 p^2 s");
  const double root = std::sqrt(rad);
  // sqrt - x = 2 x s / (sqrt + x), so neither factor cancels
  const double num = 2.0 * x * s / (root + x) + s;
  return s * s * num / (2.0 * x * (root + x + s));
}

double bogoliubov_sum(const KernelSet& k) {
  const KernelModel& m = *k.model;
  const double Nk = m.Nk();
  return 0.5 * k.lattice_total([&](double p) { return p == 0.0 ? 0.0 : bogoliubov_summand(p * p, Nk * m.vf_hat(p)); });
}

double simplified_sum_Sa(const KernelSet& k) {
  const KernelModel& m = *k.model;
  const double s = 8.0 * pi * m.scattering().a() * m.Nk();
  if (s == 0.0) return 0.0;
  return 0.5 * k.lattice_total([&](double p) { return p == 0.0 ? 0.0 : bogoliubov_summand(p * p, s); });
}

namespace {

double half_line(const std::function<double(double)>& f, double& err) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-13, &err);
}

}  // namespace

LhyIntegral lhy_integral_check(double a, double s_scale) {
  if (a < 0.0 || s_scale < 0.0) throw DomainError("a and s must be non-negative");
  LhyIntegral out;
  out.J_closed = 8.0 * std::sqrt(2.0) / 15.0;
  double err = 0.0;
  out.J = half_line([](double q) { return q == 0.0 ? 0.5 : q * q * bogoliubov_summand(q * q, 1.0); }, err);
  out.J_error = err;
  if (!(err < 1e-9)) throw ConvergenceError("LHY radial integral did not converge");
  out.closed_form = lhy_coefficient * std::pow(a, 2.5) * std::pow(s_scale, 2.5);
  const double s = 8.0 * pi * a * s_scale;
  if (s == 0.0) return out;
  // full momentum integral after p = c q, c = sqrt(s); summand(c^2 q^2, c^2) is
  // evaluated as written rather than factored into J
  const double c = std::sqrt(s);
  double err_p = 0.0;
  const double radial = half_line(
      [c](double q) { return q == 0.0 ? 0.25 * c * c : 0.5 * q * q * bogoliubov_summand(c * c * q * q, c * c); },
      err_p);
  out.quadrature = c * c * c * radial * 4.0 * pi / std::pow(2.0 * pi, 3);
  out.relative_gap = std::abs(out.quadrature - out.closed_form) / out.closed_form;
  return out;
}

double lhy_closed(double a, double N, double kappa) {
  return lhy_coefficient * std::pow(a, 2.5) * std::pow(N, 2.5 * kappa);
}

ConstantCorrections constant_corrections(const CubicTerms& c) {
  return {-c.main_factorized, -c.main_convolution};
}

bool ParticleSchedule::ordering_ok(double N) const {
  const double side = variant == Variant::minus ? -offset(N) : offset(N);
  return side >= window - slack;
}

ParticleSchedule particle_schedule(const KernelSet& k, Variant v) {
  const KernelModel& m = *k.model;
  const KernelParams& p = m.params();
  ParticleSchedule s;
  s.variant = v;
  s.sigma_mass = k.lattice_total([&](double q) { return std::pow(m.sigma(q), 2); }, 8.0);
  if (!(s.sigma_mass < p.Nd())) throw DomainError("sum sigma^2 >= N: (kappa, epsilon) outside the valid regime");
  s.window = std::pow(p.Nd(), 1.5 * p.kappa - p.epsilon);
  s.slack = std::pow(p.Nd(), 1.5 * p.kappa - 5.0 * p.epsilon);
  const double sign = v == Variant::minus ? -1.0 : 1.0;
  s.N0 = std::llround(p.Nd() - s.sigma_mass + sign * s.window);
  return s;
}

double EnergyBreakdown::scale() const { return std::pow(a, 2.5) * std::pow(N, 2.5 * kappa); }
double EnergyBreakdown::scaled_excess() const { return (total - leading) / scale(); }
double EnergyBreakdown::assembly_defect() const {
  const double parts = leading + bogoliubov_sum_S + correction_sigma2 + correction_eta_sigma + cubic_main;
  return total == 0.0 ? std::abs(parts) : std::abs(total - parts) / std::abs(total);
}

EnergyBreakdown assemble_energy(const KernelSet& k, const CubicTerms& cubic, const ParticleSchedule& schedule) {
  const KernelModel& m = *k.model;
  const KernelParams& p = m.params();
  EnergyBreakdown e;
  e.N = p.Nd();
  e.kappa = p.kappa;
  e.a = m.scattering().a();
  e.leading = 4.0 * pi * e.a * std::pow(e.N, 1.0 + p.kappa);
  e.bogoliubov_sum_S = bogoliubov_sum(k);
  e.S_a = simplified_sum_Sa(k);
  const auto corr = constant_corrections(cubic);
  e.correction_sigma2 = corr.sigma2;
  e.correction_eta_sigma = corr.eta_sigma;
  e.cubic_main = cubic.main;
  e.total = e.leading + e.bogoliubov_sum_S + e.correction_sigma2 + e.correction_eta_sigma + e.cubic_main;
  e.lhy_closed = lhy_closed(e.a, e.N, p.kappa);
  e.cubic = cubic;
  e.schedule = schedule;
  return e;
}

EnergyBreakdown evaluate_energy(const KernelParams& params, std::shared_ptr<const Scattering> scat,
                                std::optional<std::int64_t> max_shell, const CubicOptions& copt) {
  const auto n = max_shell.value_or(kernel_max_shell(params, scat->a()));
  auto shells = std::make_shared<const ShellTable>(ShellTable::enumerate(n));
  const KernelSet k = build_kernel_set(params, std::move(scat), shells);
  if (k.model->scattering().potential.is_zero()) {
    CubicTerms zero;
    return assemble_energy(k, zero, particle_schedule(k, Variant::minus));
  }
  const auto t = TorusKernels::build(k.model);
  return assemble_energy(k, cubic_terms(k, t, copt), particle_schedule(k, Variant::minus));
}

double lhy_fraction_predicted(double rho_a3) { return 128.0 / (15.0 * std::sqrt(pi)) * std::sqrt(rho_a3); }

DensityReport density_report(double rho, const KernelParams& base, std::shared_ptr<const Scattering> scat,
                             std::optional<std::int64_t> max_shell) {
  const double a = scat->a();
  if (!(a > 0.0)) throw DomainError("scattering length is zero: e / (4 pi a rho^2) undefined");
  if (!(rho > 0.0)) throw DomainError("density must be positive");
  DensityReport r;
  r.rho = rho;
  r.rho_a3 = rho * a * a * a;
  if (!(r.rho_a3 < 1e-2)) throw DomainError("rho a^3 must be < 1e-2");
  r.kappa = base.kappa;
  r.gamma = gamma_from_kappa(base.kappa);
  KernelParams p = base;
  p.N = std::llround(std::pow(rho, 1.0 / (3.0 * base.kappa - 2.0)));
  p.validate();
  r.N = p.Nd();
  r.L = p.L();
  const auto e = evaluate_energy(p, std::move(scat), max_shell);
  // rho is taken back from the rounded N so numerator and denominator match
  const double rho_n = r.N / std::pow(r.L, 3);
  r.e_over_4pi_a_rho2 = e.total / std::pow(r.L, 5) / (4.0 * pi * a * rho_n * rho_n);
  r.lhy_fraction = r.e_over_4pi_a_rho2 - 1.0;
  r.lhy_fraction_predicted = lhy_fraction_predicted(rho_n * a * a * a);
  return r;
}

double gamma_from_kappa(double kappa) { return (1.0 - kappa) / (2.0 - 3.0 * kappa); }
double kappa_from_gamma(double gamma) { return (2.0 * gamma - 1.0) / (3.0 * gamma - 1.0); }

namespace {

// exact when both integers have at most 53 significant bits
double ratio(__int128 a, __int128 b) {
  const long double q = static_cast<long double>(a) / static_cast<long double>(b);
  return static_cast<double>(q);
}

}  // namespace

double GammaFraction::value() const { return ratio(num, den); }

GammaFraction gamma_fraction(double kappa) {
  if (!(kappa > 0.0 && kappa < 2.0 / 3.0)) throw DomainError("kappa must lie in (0, 2/3)");
  if (kappa < std::ldexp(1.0, -60)) throw DomainError("kappa below 2^-60 has no exact fraction here");
  int e = 0;
  const double frac = std::frexp(kappa, &e);
  const auto m = static_cast<__int128>(std::ldexp(frac, 53));
  const int D = 53 - e;
  const __int128 one = static_cast<__int128>(1) << D;
  return {one - m, 2 * one - 3 * m};
}

double kappa_from_gamma(const GammaFraction& g) {
  __int128 a = 2 * g.num - g.den, b = 3 * g.num - g.den;
  // strip common powers of two so a power-of-two denominator converts exactly
  while (a % 2 == 0 && b % 2 == 0 && b != 0) {
    a /= 2;
    b /= 2;
  }
  return ratio(a, b);
}

ExponentSchedule exponent_schedule(double kappa, double epsilon, double delta) {
  ExponentSchedule s;
  s.kappa = kappa;
  s.epsilon = epsilon;
  s.delta = delta;
  s.ell_sigma_exponent = -kappa / 2.0 + epsilon;
  s.ell_eta_exponent = -1.0 + kappa + epsilon;
  s.ell_B_exponent = -kappa / 2.0 + 2.0 * epsilon;
  s.n_delta = delta > 0.0 ? static_cast<int>(std::ceil(1.0 / delta + 1.0 / (delta * delta))) : 0;
  const double g = 2.0 - 3.0 * kappa;
  s.exponent_mu_V = 0.75 * g - 3.5 * epsilon - 1.5 * delta;
  s.exponent_mu_K = std::min({epsilon, 1.0 - 1.5 * kappa - epsilon - 2.0 * delta, g - 7.5 * epsilon - 2.0 * delta});
  s.kappa_ok = kappa > 0.0 && kappa < 2.0 / 3.0;
  if (s.kappa_ok && kappa >= std::ldexp(1.0, -60)) {
    const auto gf = gamma_fraction(kappa);
    s.gamma = gf.value();
    s.kappa_from_gamma = kappa_from_gamma(gf);
  }
  s.epsilon_bound = g / 7.0;
  s.delta_bound = (g - 7.0 * epsilon) / 2.0;
  s.epsilon_ok = epsilon > 0.0 && epsilon < s.epsilon_bound;
  s.delta_ok = delta > 0.0 && delta < s.delta_bound;
  s.mu_V_ok = s.exponent_mu_V > 0.0;
  s.mu_K_ok = s.exponent_mu_K > 0.0;
  return s;
}

}  // namespace lhy
