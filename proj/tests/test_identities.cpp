#include <doctest.h>

#include <cmath>
#include <set>

#include "lhy/identities.hpp"

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

TEST_CASE("residual samples cover every shell orbit up to the dense limit") {
  const auto s = residual_samples(30, 2.0 * pi * 20.0);
  std::set<int> shells;
  for (const auto& m : s) {
    CHECK(m.k[0] >= m.k[1]);
    CHECK(m.k[1] >= m.k[2]);
    CHECK(m.k[2] >= 0);
    shells.insert(m.k[0] * m.k[0] + m.k[1] * m.k[1] + m.k[2] * m.k[2]);
  }
  for (int n = 1; n <= 30; ++n) CHECK(shells.count(n) == (is_three_square_excluded(n) ? 0u : 1u));
  CHECK(*shells.rbegin() <= 400);
  CHECK(*shells.rbegin() > 300);
}

TEST_CASE("convolution does not depend on the split width") {
  const auto ks = small_set(1000);
  const EwaldConvolution a(ks.model, 2.0 * pi), b(ks.model, 3.0 * pi);
  for (MomentumSample p : {MomentumSample{{1, 0, 0}}, MomentumSample{{3, 2, 1}}, MomentumSample{{12, 5, 0}}})
    CHECK(a(p) == doctest::Approx(b(p)).epsilon(1e-8));
}

TEST_CASE("sum rule: lattice and split evaluations agree") {
  const auto ks = small_set(1000);
  const auto r = sum_rule(ks);
  CHECK(r.sum == doctest::Approx(r.ewald_sum).epsilon(1e-6));
  CHECK(r.residual == doctest::Approx(r.sum - r.target));
  CHECK(r.target < 0.0);
}

TEST_CASE("scattering residual at N = 1000") {
  const auto ks = small_set(1000);
  const auto r = scattering_residual(ks);
  // frozen from a converged run (argmax on the first shell)
  CHECK(r.sup == doctest::Approx(2.8197).epsilon(1e-3));
  CHECK(r.argmax_shell == 1);
  CHECK(r.consistency <= 1e-8 * ks.model->Nk() * ks.model->vf_hat(0.0));
  CHECK(r.samples > 300);
}

TEST_CASE("residual series fits a slope") {
  const auto s = make_series({1e3, 1e4, 1e5, 1e6}, {2.0, 2.0, 2.0, 2.0});
  CHECK(s.fit.exponent == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}
