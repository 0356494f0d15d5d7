#include "lhy/identities.hpp"

#include <algorithm>
#include <set>

#include "lhy/parallel.hpp"

namespace lhy {

ResidualSeries make_series(std::vector<double> N, std::vector<double> residual) {
  ResidualSeries s{std::move(N), std::move(residual), {}};
  s.fit = fit_loglog(s.N, s.residual);
  return s;
}

double MomentumSample::p() const {
  return 2.0 * pi * std::sqrt(static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
}

std::vector<MomentumSample> residual_samples(std::int64_t n_dense, double p_max) {
  std::vector<MomentumSample> out;
  for (int a = 1; static_cast<std::int64_t>(a) * a <= n_dense; ++a)
    for (int b = 0; b <= a; ++b)
      for (int c = 0; c <= b; ++c)
        if (static_cast<std::int64_t>(a) * a + b * b + c * c <= n_dense) out.push_back({{a, b, c}});
  const double n_max = std::pow(p_max / (2.0 * pi), 2);
  std::set<std::int64_t> extra;
  for (double n = static_cast<double>(n_dense) * 1.15; n <= n_max; n *= 1.15) extra.insert(std::llround(n));
  for (auto n : extra) {
    // axis-like and diagonal-like representatives of nearby shells
    const int a = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
    out.push_back({{a, 0, 0}});
    const int d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n) / 3.0)));
    out.push_back({{d, d, d}});
  }
  return out;
}

EwaldConvolution::EwaldConvolution(std::shared_ptr<const KernelModel> m, double beta)
    : model_(std::move(m)), beta_(beta) {
  TorusOptions opt;
  opt.ewald_beta = beta;
  opt.far_grid = 0;
  // only the tabulated f_G and the wave list are needed here
  const KernelModel& km = *model_;
  const double Nk = km.Nk();
  auto h = [&](double q) { return -0.5 * Nk * km.vf_hat(q) * std::exp(-q * q / (2.0 * beta * beta)); };
  const double R_over_L = km.scattering().potential.support_radius() / km.L();
  f_G_ = RadialTable::from_momentum(h, std::max(40.0 * beta, 4.0 * pi), pi / 16.0, std::max(R_over_L, 0.1));
  K0_ = -Nk * km.vf_hat(0.0) / (4.0 * beta * beta);
  const double k_cut = 8.0 * beta;
  const int nk = static_cast<int>(std::ceil(k_cut / (2.0 * pi)));
  for (int a = -nk; a <= nk; ++a)
    for (int b = -nk; b <= nk; ++b)
      for (int c = -nk; c <= nk; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const double q = 2.0 * pi * std::sqrt(static_cast<double>(a * a + b * b + c * c));
        if (q > k_cut) continue;
        waves_.push_back({2.0 * pi * a, 2.0 * pi * b, 2.0 * pi * c, km.eta_inf(q) * std::exp(-q * q / (2.0 * beta * beta))});
      }
}

double EwaldConvolution::operator()(const MomentumSample& s) const {
  const KernelModel& m = *model_;
  const double L = m.L();
  const Vec3 p{2.0 * pi * s.k[0], 2.0 * pi * s.k[1], 2.0 * pi * s.k[2]};
  const double pn = norm(p);
  // smooth part of eta_infty, summed against V^ directly
  CompensatedSum part1;
  for (const auto& w : waves_) {
    const double d = std::sqrt((p[0] - w[0]) * (p[0] - w[0]) + (p[1] - w[1]) * (p[1] - w[1]) + (p[2] - w[2]) * (p[2] - w[2]));
    part1.add(w[3] * m.v_hat(d));
  }
  // short part -N w - f_G against L^3 V(L x); the -N w piece gives -N (Vw)^
  const double R = m.scattering().potential.support_radius() / L;
  const int panels = std::max(4, static_cast<int>(std::ceil(pn * R / pi)) + 2);
  static const GaussRule g = gauss_legendre(16);
  CompensatedSum ig;
  const double h = R / panels;
  for (int k = 0; k < panels; ++k)
    for (int i = 0; i < 16; ++i) {
      const double r = h * (k + 0.5 * (g.x[i] + 1.0));
      const double x = pn * r;
      const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
      ig.add(0.5 * h * g.w[i] * r * r * L * L * L * m.scattering().V(L * r) * f_G_(r) * sinc);
    }
  const double I_G = 4.0 * pi * ig.value();
  return part1.value() - m.params().Nd() * m.vw_hat(pn) - I_G - m.v_hat(pn) * K0_;
}

ScatteringResidual scattering_residual(const KernelSet& k, double beta, std::int64_t n_dense) {
  const KernelModel& m = *k.model;
  EwaldConvolution conv(k.model, beta);
  const double Nk = m.Nk(), N = m.params().Nd();
  const auto samples = residual_samples(n_dense, 8.0 * m.L());
  std::vector<std::array<double, 3>> vals(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const double p = samples[i].p();
    const double c = conv(samples[i]);
    const double R = p * p * m.eta_inf(p) + 0.5 * Nk * m.v_hat(p) + 0.5 * Nk / N * c;
    const double X = 0.5 * Nk / N * c + 0.5 * Nk * m.vw_hat(p);
    const double cont = p * p * m.eta_inf(p) + 0.5 * Nk * m.vf_hat(p);
    vals[i] = {R, X, R - X - cont};
  });
  ScatteringResidual out;
  out.samples = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (std::abs(vals[i][0]) > out.sup) {
      out.sup = std::abs(vals[i][0]);
      const auto& s = samples[i].k;
      out.argmax_shell = static_cast<std::int64_t>(s[0]) * s[0] + s[1] * s[1] + s[2] * s[2];
    }
    out.convolution_sup = std::max(out.convolution_sup, std::abs(vals[i][1]));
    out.consistency = std::max(out.consistency, std::abs(vals[i][2]));
  }
  return out;
}

SumRule sum_rule(const KernelSet& k) {
  const KernelModel& m = *k.model;
  const double Nk = m.Nk(), N = m.params().Nd();
  SumRule s;
  s.sum = Nk * k.lattice_total([&](double p) { return m.v_hat(p) * m.eta_inf(p); }, 6.0);
  s.target = (m.vf_hat(0.0) - m.v_hat(0.0)) * N * Nk;
  s.residual = s.sum - s.target;
  EwaldConvolution conv(k.model);
  s.ewald_sum = Nk * conv(MomentumSample{{0, 0, 0}});
  return s;
}

}  // namespace lhy
