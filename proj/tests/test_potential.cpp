#include <doctest.h>

#include <cmath>
#include <functional>

#include "lhy/potential.hpp"

using namespace lhy;

namespace {

double square_barrier_a(double V0, double R) {
  const double k = std::sqrt(V0 / 2.0);
  return R - std::tanh(k * R) / k;
}

// independent RK4 on u'' = V u / 2 with u = r f, a = R - u(R)/u'(R)
double rk4_scattering_length(const std::function<double(double)>& V, double R, int steps) {
  const double h = R / steps;
  double u = 0.0, du = 1.0, r = 0.0;
  for (int i = 0; i < steps; ++i) {
    auto f = [&](double rr, double uu) { return 0.5 * V(rr) * uu; };
    const double k1u = du, k1d = f(r, u);
    const double k2u = du + 0.5 * h * k1d, k2d = f(r + 0.5 * h, u + 0.5 * h * k1u);
    const double k3u = du + 0.5 * h * k2d, k3d = f(r + 0.5 * h, u + 0.5 * h * k2u);
    const double k4u = du + h * k3d, k4d = f(r + h, u + h * k3u);
    u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    du += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    r += h;
  }
  return R - u / du;
}

}  // namespace

TEST_CASE("square barrier scattering length matches the closed form") {
  for (auto [V0, R] : {std::pair{2.0, 1.0}, {5.0, 0.7}, {0.3, 2.0}}) {
    const auto sc = Scattering::solve(RadialPotential::square_barrier(V0, Length{R}));
    CHECK(std::abs(sc.a() - square_barrier_a(V0, R)) <= 1e-8);
  }
  CHECK(square_barrier_a(2.0, 1.0) == doctest::Approx(1.0 - std::tanh(1.0)).epsilon(1e-15));
}

TEST_CASE("gaussian scattering length agrees with an independent integrator") {
  const auto pot = RadialPotential::parse("gaussian:3,0.4,1.5");
  const auto sc = Scattering::solve(pot);
  const double ref = rk4_scattering_length([&](double r) { return pot(r); }, 1.5, 200000);
  CHECK(std::abs(sc.a() - ref) <= 1e-8);
}

TEST_CASE("8 pi a equals the integral of V f and stays below V^(0)") {
  for (const char* spec : {"square_barrier:2,1", "gaussian:3,0.4,1.5", "square_barrier:40,0.5"}) {
    const auto pot = RadialPotential::parse(spec);
    const auto sc = Scattering::solve(pot);
    const auto chk = check_scattering_length(sc.solution, pot);
    CHECK(chk.residual <= 1e-6);
    CHECK(chk.strict_inequality);
    CHECK(chk.eight_pi_a < chk.v_hat_zero);
  }
}

TEST_CASE("scattering length grows with the barrier height and stays below R") {
  double prev = 0.0;
  for (double V0 : {0.5, 1.0, 2.0, 8.0, 50.0}) {
    const double a = Scattering::solve(RadialPotential::square_barrier(V0, Length{1.0})).a();
    CHECK(a > prev);
    CHECK(a < 1.0);
    prev = a;
  }
}

TEST_CASE("exterior profile is 1 - a/r") {
  const auto sc = Scattering::solve(RadialPotential::square_barrier(2.0, Length{1.0}));
  CHECK(sc.solution.exterior_defect() <= 1e-10);
  CHECK(sc.f(3.0) == doctest::Approx(1.0 - sc.a() / 3.0).epsilon(1e-10));
}

TEST_CASE("Fourier transform of the square barrier") {
  const double V0 = 2.0, R = 1.0;
  const auto pot = RadialPotential::square_barrier(V0, Length{R});
  const auto sc = Scattering::solve(pot);
  CHECK(sc.tables.V(0.0) == doctest::Approx(V0 * 4.0 * pi / 3.0).epsilon(1e-10));
  for (double xi : {0.3, 1.7, 6.1, 23.4}) {
    const double exact = 4.0 * pi * V0 * (std::sin(xi * R) - xi * R * std::cos(xi * R)) / (xi * xi * xi);
    CHECK(std::abs(sc.tables.V(xi) - exact) <= 1e-8 * std::abs(exact) + 1e-10);
  }
  CHECK(sc.tables.Vf(0.0) == doctest::Approx(8.0 * pi * sc.a()).epsilon(1e-6));
}

TEST_CASE("zero potential") {
  const auto pot = RadialPotential::parse("zero");
  CHECK(pot.is_zero());
  const auto sc = Scattering::solve(pot);
  CHECK(sc.a() == 0.0);
  CHECK(check_scattering_length(sc.solution, pot).strict_inequality);
}

TEST_CASE("potential specs are validated") {
  CHECK_THROWS(RadialPotential::parse("square_barrier:-1,1"));
  CHECK_THROWS(RadialPotential::parse("square_barrier:1"));
  CHECK_THROWS(RadialPotential::parse("lennard_jones:1,1"));
  CHECK_THROWS(RadialPotential::parse("gaussian:1,0,1"));
  CHECK(RadialPotential::parse("square_barrier:2,1").support_radius() == 1.0);
}
