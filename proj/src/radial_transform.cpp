#include "lhy/radial_transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "lhy/common.hpp"

namespace lhy {

namespace {

std::mutex g_plan_mutex;

// smallest 2^a 3^b 5^c >= n
std::size_t smooth_size(std::size_t n) {
  std::size_t best = 1;
  while (best < n) best *= 2;
  for (std::size_t p5 = 1; p5 < 2 * n; p5 *= 5)
    for (std::size_t p3 = p5; p3 < 2 * n; p3 *= 3)
      for (std::size_t p2 = p3; p2 < 2 * n; p2 *= 2)
        if (p2 >= n && p2 < best) best = p2;
  return best;
}

}  // namespace

RadialTable RadialTable::from_momentum(const std::function<double(double)>& h, double q_max, double dq,
                                       double r_max) {
  if (!(dq > 0.0) || !(q_max > dq)) throw ConfigError("radial transform needs 0 < dq < q_max");
  // J + 1 intervals; the output grid is r_m = m pi / ((J + 1) dq)
  const std::size_t J1 = smooth_size(static_cast<std::size_t>(std::ceil(q_max / dq)));
  const std::size_t J = J1 - 1;
  const double dr = pi / (static_cast<double>(J1) * dq);
  if (r_max > 0.5 * pi / dq) throw ConfigError("radial transform: r_max beyond half the alias period");

  std::vector<double> x(J), y(J);
  CompensatedSum at_zero;
  const double h0 = h(0.0);
  at_zero.add(0.5 * h0);
  for (std::size_t j = 1; j <= J; ++j) {
    const double q = dq * static_cast<double>(j);
    const double v = h(q);
    x[j - 1] = v / q;
    at_zero.add(v);
  }
  {
    fftw_plan plan;
    {
      std::lock_guard lock(g_plan_mutex);
      plan = fftw_plan_r2r_1d(static_cast<int>(J), x.data(), y.data(), FFTW_RODFT00, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(g_plan_mutex);
    fftw_destroy_plan(plan);
  }
  const double scale = dq / (2.0 * pi * pi);
  const auto M = std::min(J, static_cast<std::size_t>(std::ceil(r_max / dr)) + 8);
  std::vector<double> f(M + 1);
  f[0] = scale * at_zero.value();
  for (std::size_t m = 1; m <= M; ++m) {
    const double r = dr * static_cast<double>(m);
    f[m] = scale * (0.5 * h0 + y[m - 1] / (2.0 * r));
  }
  RadialTable t;
  t.f_ = UniformSampled<8>(dr, std::move(f), true);
  t.r_max_ = r_max;
  return t;
}

}  // namespace lhy
