#include <doctest.h>

#include <cmath>

#include "lhy/energy.hpp"

using namespace lhy;

namespace {

std::shared_ptr<const Scattering> barrier() {
  static auto sc = std::make_shared<const Scattering>(Scattering::solve(RadialPotential::square_barrier(2.0, Length{1.0})));
  return sc;
}

KernelSet small_set(std::int64_t N) {
  KernelParams kp;
  kp.N = N;
  auto shells = std::make_shared<const ShellTable>(ShellTable::enumerate(kernel_max_shell(kp, barrier()->a())));
  return build_kernel_set(kp, barrier(), shells);
}

long double summand_ref(long double x, long double s) {
  return std::sqrt(x * x + 2 * x * s) - x - s + s * s / (2 * x);
}

}  // namespace

TEST_CASE("summand") {
  CHECK(bogoliubov_summand(1.0, 1.0) == doctest::Approx(std::sqrt(3.0) - 1.5).epsilon(1e-14));
  for (double x : {0.7, 30.0, 1e3, 1e5}) {
    const double s = 0.9;
    CHECK(bogoliubov_summand(x, s) == doctest::Approx(double(summand_ref(x, s))).epsilon(1e-9));
  }
  // the series branch joins smoothly
  const double lo = bogoliubov_summand(1e4 * (1 - 1e-9), 1.0), hi = bogoliubov_summand(1e4 * (1 + 1e-9), 1.0);
  CHECK(lo == doctest::Approx(hi).epsilon(1e-8));
  CHECK(bogoliubov_summand(1.0, 0.0) == 0.0);
  CHECK_THROWS_AS(bogoliubov_summand(1.0, -1.0), DomainError);
}

TEST_CASE("radial integral and closed form") {
  const auto r = lhy_integral_check(1.0, 1.0);
  CHECK(std::abs(r.J - 8.0 * std::sqrt(2.0) / 15.0) <= 1e-7);
  CHECK(r.relative_gap <= 1e-6);
  CHECK(lhy_coefficient == doctest::Approx(60.49975809).epsilon(1e-9));
  const auto r2 = lhy_integral_check(0.3, 7.0);
  CHECK(r2.closed_form == doctest::Approx(lhy_coefficient * std::pow(0.3 * 7.0, 2.5)).epsilon(1e-14));
  CHECK(r2.relative_gap <= 1e-6);
  CHECK(lhy_closed(0.3, 1e4, 0.5) == doctest::Approx(lhy_coefficient * std::pow(0.3, 2.5) * std::pow(1e4, 1.25)));
}

TEST_CASE("simplified sum against a brute-force lattice loop") {
  const auto ks = small_set(1000);
  const double a = barrier()->a();
  const double s = 8.0 * pi * a * std::pow(1000.0, 0.5);
  const int K = 100;
  long double sum = 0.0L;
  for (int i = -K; i <= K; ++i)
    for (int j = -K; j <= K; ++j)
      for (int k = -K; k <= K; ++k) {
        const int n = i * i + j * j + k * k;
        if (n == 0 || n > K * K) continue;
        const double p2 = 4.0 * pi * pi * n;
        sum += summand_ref(p2, s);
      }
  // remainder beyond |p| = 2 pi K from s^3 / (2 p^4) - 5 s^4 / (8 p^6)
  const double P = 2.0 * pi * K;
  const double w = 4.0 * pi / std::pow(2.0 * pi, 3);
  const double tail = w * (s * s * s / (2.0 * P) - 5.0 * std::pow(s, 4) / (24.0 * P * P * P));
  const double brute = 0.5 * (double(sum) + tail);
  CHECK(simplified_sum_Sa(ks) == doctest::Approx(brute).epsilon(1e-5));
  CHECK(bogoliubov_sum(ks) < simplified_sum_Sa(ks));
}

TEST_CASE("energy breakdown at N = 1000") {
  KernelParams kp;
  kp.N = 1000;
  const auto e = evaluate_energy(kp, barrier());
  CHECK(e.assembly_defect() <= 1e-12);
  CHECK(e.leading == doctest::Approx(4.0 * pi * e.a * std::pow(1000.0, 1.5)));
  // the two constant corrections cancel the cubic main term
  CHECK(e.total - e.leading == doctest::Approx(e.bogoliubov_sum_S).epsilon(1e-10));
  CHECK(e.correction_sigma2 == -e.cubic.main_factorized);
  CHECK(e.cubic.main == doctest::Approx(e.cubic.main_factorized + e.cubic.main_convolution));
  CHECK(e.cubic.vn == doctest::Approx(e.cubic.vn_swapped).epsilon(1e-10));
  CHECK(e.schedule.ordering_ok(e.N));
  CHECK(e.schedule.N0 < 1000);
  CHECK(e.scaled_excess() > 0.0);
  CHECK(e.scaled_excess() < lhy_coefficient);
}

TEST_CASE("zero potential gives zero energy") {
  KernelParams kp;
  kp.N = 1000;
  auto zero = std::make_shared<const Scattering>(Scattering::solve(RadialPotential::zero()));
  const auto e = evaluate_energy(kp, zero);
  CHECK(e.total == 0.0);
  CHECK(e.leading == 0.0);
  CHECK_THROWS_AS(density_report(1e-3, kp, zero), DomainError);
  CHECK_THROWS_AS(density_report(1.0, kp, barrier()), DomainError);
}

TEST_CASE("exponent schedule") {
  const auto s = exponent_schedule(0.5, 0.05, 0.05);
  CHECK(s.valid());
  CHECK(s.exponent_mu_V == doctest::Approx(0.125));
  CHECK(s.exponent_mu_K == doctest::Approx(0.025));
  CHECK(s.n_delta == 420);
  CHECK(s.gamma == 1.0);
  CHECK(s.ell_sigma_exponent == doctest::Approx(-0.2));
  CHECK_FALSE(exponent_schedule(0.5, s.epsilon_bound, 0.05).valid());
  CHECK_FALSE(exponent_schedule(0.5, 0.05, s.delta_bound).valid());
  CHECK_FALSE(exponent_schedule(0.5, 0.05, 0.2).mu_V_ok);
}

TEST_CASE("gamma and kappa round trip bit for bit") {
  for (int i = 1; i < 666; ++i) {
    const double k = i / 1000.0;
    CHECK(kappa_from_gamma(gamma_fraction(k)) == k);
    CHECK(gamma_fraction(k).value() == doctest::Approx(gamma_from_kappa(k)).epsilon(1e-12));
  }
  CHECK(gamma_fraction(0.5).value() == 1.0);
  CHECK_THROWS_AS(gamma_fraction(0.7), DomainError);
}

TEST_CASE("predicted LHY fraction") {
  CHECK(lhy_fraction_predicted(1e-4) == doctest::Approx(128.0 / (15.0 * std::sqrt(pi)) * 1e-2).epsilon(1e-14));
  CHECK(lhy_fraction_predicted(1e-4) == doctest::Approx(0.048144).epsilon(1e-5));
}
