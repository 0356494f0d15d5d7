#include <doctest.h>

#include <cmath>

#include "lhy/focktoy.hpp"

using namespace lhy;
using namespace lhy::fock;

namespace {

auto constant_v(double v) {
  return [v](const Label&) { return v; };
}

}  // namespace

TEST_CASE("basis dimensions") {
  CHECK(FockBasis::build(1, 3, 3).dim() == 4);
  CHECK(FockBasis::build(2, 2, 2).dim() == 6);
  CHECK(FockBasis::build(3, 10, 10).dim() == 286);
  const auto pairs = pair_mode_set(1, constant_v(1.0));
  // zero total momentum: n(e1) == n(-e1)
  const auto b = FockBasis::build(std::vector<int>{2, 3, 3}, 8, &pairs);
  CHECK(b.dim() == 12);
  for (std::size_t i = 0; i < b.dim(); ++i) CHECK(b.occ(i, 1) == b.occ(i, 2));
  CHECK_THROWS_AS(FockBasis::build(4, 20, 80, 1000), ConfigError);
}

TEST_CASE("canonical commutation relations below the cutoff") {
  CHECK(ccr_defect(FockBasis::build(2, 4, 6)) <= 1e-14);
  CHECK(ccr_defect(FockBasis::build(3, 3, 5)) <= 1e-14);
}

TEST_CASE("Weyl displacement gives a coherent state") {
  const auto b = FockBasis::build(1, 50, 50);
  const State v = expm_apply(weyl_generator(b, 0, 2.5), State::Unit(51, b.vacuum()));
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.dot(number_operator(b) * v) == doctest::Approx(2.5).epsilon(1e-10));
  const DenseOp W = weyl_displace(b, 0, 2.5);
  CHECK(unitarity_defect(W) <= 1e-10);
  CHECK((W.col(0) - v).norm() <= 1e-10);
}

TEST_CASE("Bogoliubov transformation populates the pair") {
  const auto m = pair_mode_set(1, constant_v(1.0));
  const auto b = FockBasis::build(std::vector<int>{0, 40, 40}, 80, &m);
  const std::vector<double> mu{0.0, 0.3, 0.3};
  const DenseOp U = bogoliubov_unitary(m, mu, b);
  CHECK(unitarity_defect(U) <= 1e-10);
  const State v = U.col(b.vacuum());
  CHECK(v.dot(mode_number(b, 1) * v) == doctest::Approx(std::pow(std::sinh(0.3), 2)).epsilon(1e-12));
  // U* a_p U = gamma a_p + sigma a*_{-p} on low states, all momenta allowed
  const ToyModeSet pm({{1, 0, 0}, {-1, 0, 0}}, constant_v(1.0));
  const auto full = FockBasis::build(2, 40, 80);
  const DenseOp Uf = bogoliubov_unitary(pm, std::vector<double>{0.3, 0.3}, full);
  const DenseOp a1 = DenseOp(annihilation(full, 0)), a2 = DenseOp(annihilation(full, 1));
  const DenseOp lhs = Uf.transpose() * a1 * Uf;
  const DenseOp rhs = std::cosh(0.3) * a1 + std::sinh(0.3) * a2.transpose();
  double worst = 0.0;
  for (std::size_t j = 0; j < full.dim(); ++j) {
    if (full.total(j) > 3) continue;
    worst = std::max(worst, (lhs.col(j) - rhs.col(j)).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("quadratic pair ground energy") {
  const ToyModeSet pair({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}}, constant_v(1.0), std::vector<double>{0.0, 1.0, 1.0});
  const auto b = FockBasis::build(std::vector<int>{0, 60, 60}, 120, &pair);
  const auto H = quadratic_toy_hamiltonian(pair, 1.0, 0.5, 1.0, b);
  CHECK(hermiticity_defect(H) == 0.0);
  CHECK(std::abs(ground_energy(H) - (std::sqrt(3.0) - 2.0)) <= 1e-8);
  // general (eps, v): sqrt(eps^2 + 2 eps v) - eps - v
  const ToyModeSet pair2({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}}, constant_v(0.5), std::vector<double>{0.0, 2.0, 2.0});
  const auto b2 = FockBasis::build(std::vector<int>{0, 50, 50}, 100, &pair2);
  const double e = ground_energy(quadratic_toy_hamiltonian(pair2, 1.0, 0.5, 1.0, b2));
  CHECK(e == doctest::Approx(std::sqrt(4.0 + 2.0) - 2.5).epsilon(1e-9));
}

TEST_CASE("toy Hamiltonian is exactly symmetric") {
  const auto m = pair_mode_set(2, [](const Label& k) { return 1.0 / (1.0 + k[0] * k[0] + k[1] * k[1]); });
  const auto b = FockBasis::build(std::vector<int>(5, 8), 8, &m);
  CHECK(hermiticity_defect(toy_hamiltonian(m, 100.0, 0.5, b)) == 0.0);
}

TEST_CASE("trial state energy: exact expectation equals the closed formula") {
  const auto draws = oracle_draws(20, 0x5EED);
  REQUIRE(draws.size() == 20);
  for (const auto& d : draws) {
    CHECK(d.result.relative_gap() <= 1e-6);
    CHECK(d.result.boundary_mass <= 1e-8);
  }
  // same seed, same draws
  const auto again = oracle_draws(3, 0x5EED);
  CHECK(again[2].result.exact == draws[2].result.exact);
}

TEST_CASE("trial state energy with a momentum-dependent interaction") {
  const auto m = pair_mode_set(2, [](const Label& k) { return 1.0 + 0.3 * (k[0] * k[0] + k[1] * k[1]); });
  const auto b = FockBasis::build(std::vector<int>(5, 30), 30, &m);
  const auto r = trial_state_energy_oracle(m, ToyKernels{{0.0, 0.25, 0.25, -0.15, -0.15}, {}, {}}, 50.0, 0.5, 1.5, b);
  CHECK(r.relative_gap() <= 1e-9);
}

TEST_CASE("truncation convergence") {
  const auto m = pair_mode_set(2, constant_v(0.8));
  const ToyKernels k{{0.0, 0.2, 0.2, 0.3, 0.3}, {}, {}};
  const auto b1 = FockBasis::build(std::vector<int>(5, 15), 15, &m);
  const auto b2 = FockBasis::build(std::vector<int>(5, 30), 30, &m);
  const auto r1 = trial_state_energy_oracle(m, k, 100.0, 0.5, 1.0, b1);
  const auto r2 = trial_state_energy_oracle(m, k, 100.0, 0.5, 1.0, b2);
  CHECK(std::abs(r1.exact - r2.exact) <= 1e-6 * std::abs(r2.exact));
}

TEST_CASE("cutoff cubic generator gives a unitary") {
  const auto m = pair_mode_set(1, constant_v(1.0));
  const auto b = FockBasis::build(std::vector<int>(3, 12), 12, &m);
  const SparseOp A = cubic_A(m, std::vector<double>{0.0, 0.3, 0.3}, std::vector<double>{0.0, 0.5, 0.5}, 1.0, b);
  const SparseOp G = cubic_generator(A, 6, b);
  // anti-symmetric generator
  CHECK(DenseOp(SparseOp(G + SparseOp(G.transpose()))).cwiseAbs().maxCoeff() == 0.0);
  CHECK(unitarity_defect(cutoff_cubic_unitary(A, 6, b)) <= 1e-10);
  CHECK(theta_profile(0.5) == 1.0);
  CHECK(theta_profile(2.5) == 0.0);
  CHECK_THROWS_AS(cubic_generator(A, 10, b), ConfigError);
}

TEST_CASE("particle number identity") {
  const auto m = pair_mode_set(2, constant_v(1.0));
  const auto b = FockBasis::build(std::vector<int>(5, 30), 30, &m);
  const ToyKernels k{{0.0, 0.2, 0.2, -0.3, -0.3}, {0.0, 0.05, 0.05, 0.04, 0.04}, {0.0, 0.06, 0.06, 0.03, 0.03}};
  const auto plain = particle_number_check(m, k, 1.0, 2.0, b);
  CHECK(plain.exact == doctest::Approx(2.0 + 2 * std::pow(std::sinh(0.2), 2) + 2 * std::pow(std::sinh(0.3), 2)).epsilon(1e-10));
  const auto cubic = particle_number_check(m, k, 1.0, 2.0, b, CubicFactor{3});
  CHECK(std::abs(cubic.exact - cubic.analytic) <= 1e-7);
  const auto empty = particle_number_check(m, ToyKernels{std::vector<double>(5, 0.0), {}, {}}, 1.0, 0.0, b);
  CHECK(empty.exact == 0.0);
}
