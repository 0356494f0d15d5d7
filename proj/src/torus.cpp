#include "lhy/torus.hpp"

#include <algorithm>

namespace lhy {

double RadialProfile::operator()(double r) const {
  if (r >= r_cut) return 0.0;
  double v = 0.0;
  if (coulomb != 0.0) v -= coulomb * model->params().Nd() * model->scattering().w(model->L() * r);
  if (!table.empty()) v += table(r);
  if (compact) v += compact(r);
  return v;
}

TorusKernel::TorusKernel(RadialProfile profile, std::vector<std::array<double, 4>> waves, double constant,
                         int far_grid)
    : profile_(std::move(profile)), waves_(std::move(waves)), constant_(constant) {
  const double reach = profile_.r_cut + std::sqrt(3.0) / 2.0;
  const int nmax = static_cast<int>(std::ceil(reach));
  std::vector<Vec3> far;
  for (int a = -nmax; a <= nmax; ++a)
    for (int b = -nmax; b <= nmax; ++b)
      for (int c = -nmax; c <= nmax; ++c) {
        const Vec3 n{static_cast<double>(a), static_cast<double>(b), static_cast<double>(c)};
        if (std::max({std::abs(a), std::abs(b), std::abs(c)}) <= 1)
          images_.push_back(n);
        else if (norm(n) <= reach)
          far.push_back(n);
      }
  if (far.empty()) return;
  grid_ = std::max(far_grid, 5);
  far_.assign(static_cast<std::size_t>(grid_) * grid_ * grid_, 0.0);
  const double h = 1.0 / (grid_ - 1);
  for (int i = 0; i < grid_; ++i)
    for (int j = 0; j < grid_; ++j)
      for (int k = 0; k < grid_; ++k) {
        const Vec3 y{-0.5 + i * h, -0.5 + j * h, -0.5 + k * h};
        CompensatedSum s;
        for (const auto& n : far) s.add(profile_(norm(Vec3{y[0] + n[0], y[1] + n[1], y[2] + n[2]})));
        far_[(static_cast<std::size_t>(i) * grid_ + j) * grid_ + k] = s.value();
      }
}

double TorusKernel::far_field(const Vec3& y) const {
  // tricubic Lagrange on the cell grid, stencils clamped inside
  const double h = 1.0 / (grid_ - 1);
  int base[3];
  double wts[3][4];
  for (int d = 0; d < 3; ++d) {
    const double t = (y[d] + 0.5) / h;
    int j = static_cast<int>(std::floor(t)) - 1;
    j = std::clamp(j, 0, grid_ - 4);
    base[d] = j;
    const double u = t - j;
    wts[d][0] = -(u - 1) * (u - 2) * (u - 3) / 6.0;
    wts[d][1] = u * (u - 2) * (u - 3) / 2.0;
    wts[d][2] = -u * (u - 1) * (u - 3) / 2.0;
    wts[d][3] = u * (u - 1) * (u - 2) / 6.0;
  }
  double v = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double wab = wts[0][a] * wts[1][b];
      const std::size_t row = (static_cast<std::size_t>(base[0] + a) * grid_ + (base[1] + b)) * grid_ + base[2];
      for (int c = 0; c < 4; ++c) v += wab * wts[2][c] * far_[row + c];
    }
  return v;
}

double TorusKernel::operator()(const Vec3& x) const {
  Vec3 y;
  for (int i = 0; i < 3; ++i) y[i] = x[i] - std::nearbyint(x[i]);
  double v = constant_;
  const double rc = profile_.r_cut;
  for (const auto& n : images_) {
    const Vec3 d{y[0] + n[0], y[1] + n[1], y[2] + n[2]};
    const double r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    if (r2 < rc * rc) v += profile_(std::sqrt(r2));
  }
  if (grid_ > 0) v += far_field(y);
  for (const auto& w : waves_) v += w[3] * std::cos(w[0] * x[0] + w[1] * x[1] + w[2] * x[2]);
  return v;
}

namespace {

// smallest radius beyond which the profile stays below tol |k(0)| on the table grid
double find_cutoff(const RadialProfile& p, double tol) {
  const double dr = p.table.dr();
  const double r_end = p.table.r_max();
  RadialProfile probe = p;
  probe.r_cut = r_end + 1.0;
  const double k0 = std::abs(probe(0.0));
  double cut = dr;
  for (double r = dr; r <= r_end; r += dr)
    if (std::abs(probe(r)) > tol * k0) cut = r + dr;
  return std::min(cut, r_end);
}

}  // namespace

TorusKernel make_torus_kernel(const KernelModel& m, const std::function<double(double)>& F, bool coulomb,
                              const TorusOptions& opt) {
  RadialProfile p;
  p.model = &m;
  p.coulomb = coulomb ? 1.0 : 0.0;
  const double Nk = m.Nk();
  std::function<double(double)> h;
  if (coulomb)
    h = [&](double q) { return q * q * F(q) + 0.5 * Nk * m.vf_hat(q); };
  else
    h = [&](double q) { return q * q * F(q); };
  p.table = RadialTable::from_momentum(h, opt.q_max_over_L * m.L(), opt.dq, opt.r_table);
  p.r_cut = find_cutoff(p, opt.tail_tolerance);
  return TorusKernel(std::move(p), {}, 0.0, opt.far_grid);
}

TorusKernel make_eta_infty_ewald(const KernelModel& m, const TorusOptions& opt, double& K0, RadialTable* f_G_out) {
  const double beta = opt.ewald_beta;
  const double Nk = m.Nk();
  RadialProfile p;
  p.model = &m;
  p.coulomb = 1.0;
  // -f_G, where f_G is the transform of eta_infty exp(-q^2 / 2 beta^2)
  auto h = [&](double q) { return 0.5 * Nk * m.vf_hat(q) * std::exp(-q * q / (2.0 * beta * beta)); };
  const double q_max = std::max(40.0 * beta, 4.0 * pi);
  const double dq = std::min(opt.dq, pi / 16.0);
  p.table = RadialTable::from_momentum(h, q_max, dq, opt.r_table);
  p.r_cut = find_cutoff(p, opt.tail_tolerance);
  if (f_G_out) {
    *f_G_out = RadialTable::from_momentum([&](double q) { return -h(q); }, q_max, dq, opt.r_table);
  }
  K0 = -Nk * m.vf_hat(0.0) / (4.0 * beta * beta);
  std::vector<std::array<double, 4>> waves;
  const double k_cut = 8.0 * beta;
  const int nk = static_cast<int>(std::ceil(k_cut / (2.0 * pi)));
  for (int a = -nk; a <= nk; ++a)
    for (int b = -nk; b <= nk; ++b)
      for (int c = -nk; c <= nk; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const Vec3 k{2.0 * pi * a, 2.0 * pi * b, 2.0 * pi * c};
        const double q = norm(k);
        if (q > k_cut) continue;
        waves.push_back({k[0], k[1], k[2], m.eta_inf(q) * std::exp(-q * q / (2.0 * beta * beta))});
      }
  return TorusKernel(std::move(p), std::move(waves), -K0, opt.far_grid);
}

double TorusKernels::v_check(double r) const {
  const double L = model->L();
  return L * L * L * model->scattering().V(L * r);
}

double TorusKernels::w_check(double r) const {
  const double L = model->L();
  const auto& s = model->scattering();
  const double rho = L * r;
  if (rho > s.potential.support_radius()) return 0.0;
  return L * L * L * s.V(rho) * (1.0 + s.w(rho));
}

TorusKernels TorusKernels::build(std::shared_ptr<const KernelModel> mp, const TorusOptions& opt) {
  TorusKernels t;
  t.model = mp;
  t.options = opt;
  const KernelModel& m = *mp;
  t.sigma = make_torus_kernel(m, [&](double q) { return m.sigma(q); }, true, opt);
  t.eta = make_torus_kernel(m, [&](double q) { return m.eta(q); }, true, opt);
  t.eta_infty = make_eta_infty_ewald(m, opt, t.ewald_K0);
  t.sigma2 = make_torus_kernel(m, [&](double q) { return std::pow(m.sigma(q), 2); }, false, opt);
  t.sigma_eta = make_torus_kernel(m, [&](double q) { return m.sigma(q) * m.eta(q); }, false, opt);
  t.eta2 = make_torus_kernel(m, [&](double q) { return std::pow(m.eta(q), 2); }, false, opt);
  t.w_eta = make_torus_kernel(m, [&](double q) { return m.w_hat(q) * m.eta(q); }, false, opt);
  t.w_sigma = make_torus_kernel(m, [&](double q) { return m.w_hat(q) * m.sigma(q); }, false, opt);
  return t;
}

DecayMeasure torus_decay(const TorusKernel& k, double ell, int m, double N, int M) {
  if (!(ell > 0.0)) throw DomainError("decay scale must be positive");
  if (M < 4 || M % 2) throw ConfigError("decay grid must be even and >= 4");
  DecayMeasure d;
  d.region_empty = true;
  for (int i = 0; i <= M / 2; ++i)
    for (int j = 0; j <= i; ++j)
      for (int l = 0; l <= j; ++l) {
        const Vec3 x{double(i) / M, double(j) / M, double(l) / M};
        const double r = norm(x);
        if (r < 4.0 * ell) continue;
        d.region_empty = false;
        const double c = std::abs(k(x)) * std::pow(r / ell, m) / N;
        if (c > d.sup_constant) {
          d.sup_constant = c;
          d.argmax_radius = r;
        }
      }
  return d;
}

std::vector<double> graded_breaks(double r0, double rho) {
  std::vector<double> b{0.0};
  double r = r0;
  while (r < rho) {
    b.push_back(r);
    r *= 2.0;
  }
  b.push_back(rho);
  return b;
}

std::vector<Node> ball_rule(const Vec3& c, std::span<const double> breaks, int per_panel, int n_theta, int n_phi,
                            bool clip_to_cell) {
  const GaussRule gr = gauss_legendre(per_panel);
  const GaussRule gt = gauss_legendre(n_theta);
  std::vector<Node> out;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double r0 = breaks[b], r1 = breaks[b + 1];
    for (int i = 0; i < per_panel; ++i) {
      const double r = r0 + 0.5 * (r1 - r0) * (gr.x[i] + 1.0);
      const double wr = 0.5 * (r1 - r0) * gr.w[i] * r * r;
      for (int t = 0; t < n_theta; ++t) {
        const double ct = gt.x[t], st = std::sqrt(1.0 - ct * ct);
        for (int f = 0; f < n_phi; ++f) {
          const double phi = 2.0 * pi * (f + 0.5) / n_phi;
          const Vec3 d{r * st * std::cos(phi), r * st * std::sin(phi), r * ct};
          if (clip_to_cell && (std::abs(d[0]) > 0.5 || std::abs(d[1]) > 0.5 || std::abs(d[2]) > 0.5)) continue;
          out.push_back({{c[0] + d[0], c[1] + d[1], c[2] + d[2]}, wr * gt.w[t] * 2.0 * pi / n_phi});
        }
      }
    }
  }
  return out;
}

std::vector<Node> octahedral_ball_rule(double rho, int n_radial) {
  const GaussRule gr = gauss_legendre(n_radial);
  std::vector<Node> out;
  for (int i = 0; i < n_radial; ++i) {
    const double r = 0.5 * rho * (gr.x[i] + 1.0);
    const double w = 0.5 * rho * gr.w[i] * r * r * 4.0 * pi / 6.0;
    for (int axis = 0; axis < 3; ++axis)
      for (int s : {-1, 1}) {
        Vec3 x{0.0, 0.0, 0.0};
        x[axis] = s * r;
        out.push_back({x, w});
      }
  }
  return out;
}

}  // namespace lhy
