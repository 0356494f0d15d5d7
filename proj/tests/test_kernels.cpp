#include <doctest.h>

#include <cmath>
#include <random>

#include "lhy/convolution.hpp"
#include "lhy/kernels.hpp"
#include "lhy/torus.hpp"

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

}  // namespace

TEST_CASE("parameter validation") {
  KernelParams p;
  CHECK_NOTHROW(p.validate());
  p.N = 1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.kappa = 0.7;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.epsilon = p.epsilon_bound();
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.delta = p.delta_bound();
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  CHECK(p.n_cutoff() == 420);
  CHECK(p.L() == doctest::Approx(std::sqrt(1000.0)));
}

TEST_CASE("cutoff function") {
  CHECK(chi_l(0.5) == 0.0);
  CHECK(chi_l(1.0) == 0.0);
  CHECK(chi_l(2.0) == 1.0);
  CHECK(chi_l(3.0) == 1.0);
  double prev = 0.0;
  for (double x = 1.0; x <= 2.0; x += 0.01) {
    const double c = chi_l(x);
    CHECK(c >= prev);
    CHECK(c <= 1.0);
    prev = c;
  }
}

TEST_CASE("kernel formulas") {
  const auto ks = small_set(1000);
  const auto& m = *ks.model;
  const double p = 2.0 * pi * 3.0;
  CHECK(m.eta_inf(p) == doctest::Approx(-m.Nk() * m.vf_hat(p) / (2.0 * p * p)).epsilon(1e-15));
  CHECK(m.eta_inf(0.0) == 0.0);
  // below 1/ell the cutoffs vanish
  CHECK(m.mu(0.5 / ks.params().ell_sigma()) == 0.0);
  CHECK(m.eta(0.5 / ks.params().ell_eta()) == 0.0);
  CHECK(m.mu(3.0 / ks.params().ell_sigma()) == doctest::Approx(m.mu_inf(3.0 / ks.params().ell_sigma())));
  CHECK(ks.values(KernelId::sigma).size() == ks.sigma.size());
}

TEST_CASE("kernel identities and the pointwise gamma-sigma bound") {
  for (std::int64_t N : {1000, 20000}) {
    const auto ks = small_set(N);
    const auto id = kernel_identities(ks);
    CHECK(id.hyperbolic_infty <= 1e-12);
    CHECK(id.hyperbolic_cut <= 1e-12);
    CHECK(id.product <= 1e-12);
    CHECK(id.square <= 1e-12);
    CHECK(id.tanh <= 1e-12);
    CHECK(gamma_sigma_bound_excess(ks) <= 0.0);
  }
}

TEST_CASE("norm table carries every bound") {
  const auto ks = small_set(1000);
  const auto norms = verify_norm_bounds(ks);
  CHECK(norms.size() == 13);
  for (const auto& e : norms) CHECK(std::isfinite(e.measured));
}

TEST_CASE("transform convolution equals the direct double loop") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int M = 4, S = 2 * M + 1;
  std::vector<double> a(S * S * S), b(S * S * S);
  for (auto& v : a) v = u(rng);
  for (auto& v : b) v = u(rng);
  auto at = [&](const std::vector<double>& t) {
    return [&t, M, S](int i, int j, int k) {
      if (std::abs(i) > M || std::abs(j) > M || std::abs(k) > M) return 0.0;
      return t[((i + M) * S + (j + M)) * S + (k + M)];
    };
  };
  const auto fast = cube_convolution_fft(M, at(a), at(b));
  const auto slow = cube_convolution_direct(M, at(a), at(b));
  REQUIRE(fast.size() == slow.size());
  for (std::size_t i = 0; i < fast.size(); ++i) CHECK(std::abs(fast[i] - slow[i]) <= 1e-12);
}

TEST_CASE("position transform of a single shell") {
  std::vector<double> coeff(4, 0.0);
  coeff[1] = 1.0;
  const int M = 16;
  const auto pk = position_transform(coeff, M);
  CHECK(pk.at(0, 0, 0) == doctest::Approx(6.0));
  for (int i = 0; i < M; ++i) CHECK(pk.at(i, 0, 0) == doctest::Approx(4.0 + 2.0 * std::cos(2.0 * pi * i / M)));
  CHECK(pk.imag_residue <= 1e-12);
}

TEST_CASE("torus sigma kernel: grid-independent decay constant") {
  const auto ks = small_set(10000);
  const auto& m = *ks.model;
  const auto k = make_torus_kernel(m, [&](double q) { return m.sigma(q); }, true);
  const double ell = ks.params().ell_sigma();
  const auto a = torus_decay(k, ell, 4, ks.params().Nd(), 32);
  const auto b = torus_decay(k, ell, 4, ks.params().Nd(), 64);
  CHECK_FALSE(a.region_empty);
  CHECK(a.sup_constant == doctest::Approx(b.sup_constant).epsilon(1e-12));
  // the torus kernel at x = 0 is the lattice sum of sigma
  const double lattice = ks.lattice_total([&](double p) { return m.sigma(p); });
  CHECK(k({0.0, 0.0, 0.0}) == doctest::Approx(lattice).epsilon(5e-5));
}
