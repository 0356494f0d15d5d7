#include "lhy/cubic.hpp"

#include "lhy/parallel.hpp"

namespace lhy {

namespace {

struct Sums {
  double sigma2, eta2, sigma_eta, v_eta_inf, w_eta, w_sigma;
};

Sums radial_sums(const KernelSet& k) {
  const KernelModel& m = *k.model;
  Sums s{};
  s.sigma2 = k.lattice_total([&](double p) { return std::pow(m.sigma(p), 2); }, 8.0);
  s.eta2 = k.lattice_total([&](double p) { return std::pow(m.eta(p), 2); }, 8.0);
  s.sigma_eta = k.lattice_total([&](double p) { return m.sigma(p) * m.eta(p); }, 8.0);
  s.v_eta_inf = k.lattice_total([&](double p) { return m.v_hat(p) * m.eta_inf(p); }, 6.0);
  s.w_eta = k.lattice_total([&](double p) { return m.w_hat(p) * m.eta(p); }, 6.0);
  s.w_sigma = k.lattice_total([&](double p) { return m.w_hat(p) * m.sigma(p); }, 6.0);
  return s;
}

// int dy G(x, y)^2 over the torus, G = eta(x) A + sigma(x) B + C, where
//   A = sigma(y) + sigma(y - x), B = eta(y) + eta(y - x),
//   C = sigma(y) eta(x - y) + eta(y) sigma(x - y).
// The A^2, B^2, AB moments are closed forms; the rest uses a ball rule
// centred at x/2 whose nodes come in mirror pairs y, x - y.
double quartic_density(const Vec3& x, const TorusKernels& t, const Sums& s, double radius, const CubicOptions& o,
                       const GaussRule& gr, const GaussRule& gt) {
  const double sx = t.sigma(x), ex = t.eta(x);
  const double a2 = 2.0 * s.sigma2 + 2.0 * t.sigma2(x);
  const double b2 = 2.0 * s.eta2 + 2.0 * t.eta2(x);
  const double ab = 2.0 * s.sigma_eta + 2.0 * t.sigma_eta(x);

  const Vec3 c{0.5 * x[0], 0.5 * x[1], 0.5 * x[2]};
  const double L = t.model->L();
  const auto breaks = graded_breaks(0.5 / L, radius);
  CompensatedSum ac, bc, cc;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double r0 = breaks[b], r1 = breaks[b + 1];
    for (int i = 0; i < o.inner_per_panel; ++i) {
      const double r = r0 + 0.5 * (r1 - r0) * (gr.x[i] + 1.0);
      const double wr = 0.5 * (r1 - r0) * gr.w[i] * r * r;
      for (int th = 0; th < o.inner_theta / 2; ++th) {
        const double ct = gt.x[th], st = std::sqrt(1.0 - ct * ct);
        for (int f = 0; f < o.inner_phi; ++f) {
          const double phi = 2.0 * pi * (f + 0.5) / o.inner_phi;
          const Vec3 d{r * st * std::cos(phi), r * st * std::sin(phi), r * ct};
          if (std::abs(d[0]) > 0.5 || std::abs(d[1]) > 0.5 || std::abs(d[2]) > 0.5) continue;
          const double w = wr * gt.w[th] * 2.0 * pi / o.inner_phi;
          const Vec3 y{c[0] + d[0], c[1] + d[1], c[2] + d[2]};
          const Vec3 ym{c[0] - d[0], c[1] - d[1], c[2] - d[2]};  // x - y
          const double s1 = t.sigma(y), e1 = t.eta(y), s2 = t.sigma(ym), e2 = t.eta(ym);
          // at y: y - x = -ym, kernels are even; at the mirror the roles swap
          const double A = s1 + s2, B = e1 + e2, C = s1 * e2 + e1 * s2;
          ac.add(2.0 * w * A * C);
          bc.add(2.0 * w * B * C);
          cc.add(2.0 * w * C * C);
        }
      }
    }
  }
  return ex * ex * a2 + sx * sx * b2 + cc.value() + 2.0 * ex * sx * ab + 2.0 * ex * ac.value() +
         2.0 * sx * bc.value();
}

}  // namespace

CubicTerms cubic_terms(const KernelSet& k, const TorusKernels& t, const CubicOptions& opt) {
  if (opt.inner_theta % 2 || opt.inner_phi % 2) throw ConfigError("inner angular orders must be even");
  const KernelModel& m = *k.model;
  const KernelParams& kp = m.params();
  const double Nk1 = m.Nk() / kp.Nd();
  const Sums s = radial_sums(k);
  const double rho = m.scattering().potential.support_radius() / m.L();
  const double radius = std::min(opt.inner_scale * kp.ell_eta(), std::sqrt(3.0) / 2.0);

  const auto outer = octahedral_ball_rule(rho, opt.outer_radial);
  const GaussRule gr = gauss_legendre(opt.inner_per_panel);
  const GaussRule gt = gauss_legendre(opt.inner_theta);

  // per outer node: main, kc parts 3..6, vn density at x and at -x
  std::vector<std::array<double, 7>> vals(outer.size());
  parallel_for(outer.size(), [&](std::size_t i) {
    const Vec3& x = outer[i].x;
    const double r = norm(x);
    const double V = t.v_check(r), W = t.w_check(r);
    const double sg = t.sigma(x), et = t.eta(x);
    auto& v = vals[i];
    v[0] = V * t.eta_infty(x) * t.sigma2(x);
    v[1] = W * et * t.sigma2(x);
    v[2] = W * t.sigma_eta(x) * sg;
    v[3] = t.w_eta(x) * sg * sg;
    v[4] = t.w_sigma(x) * sg * et;
    const Vec3 xm{-x[0], -x[1], -x[2]};
    v[5] = V * quartic_density(x, t, s, radius, opt, gr, gt);
    v[6] = V * quartic_density(xm, t, s, radius, opt, gr, gt);
  });
  std::array<CompensatedSum, 7> acc;
  for (std::size_t i = 0; i < outer.size(); ++i)
    for (int j = 0; j < 7; ++j) acc[j].add(outer[i].w * vals[i][j]);

  CubicTerms c;
  c.main_factorized = Nk1 * s.v_eta_inf * s.sigma2;
  c.main_convolution = Nk1 * acc[0].value();
  c.main = c.main_factorized + c.main_convolution;
  c.kc_parts = {Nk1 * s.w_eta * s.sigma2, Nk1 * s.w_sigma * s.sigma_eta, Nk1 * acc[1].value(),
                Nk1 * acc[2].value(),      Nk1 * acc[3].value(),           Nk1 * acc[4].value()};
  c.kc = 0.0;
  for (double v : c.kc_parts) c.kc += v;
  c.vn = 0.5 * Nk1 / kp.Nd() * acc[5].value();
  c.vn_swapped = 0.5 * Nk1 / kp.Nd() * acc[6].value();
  return c;
}

}  // namespace lhy
