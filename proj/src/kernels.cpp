#include "lhy/kernels.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <fstream>
#include <mutex>

#include "lhy/parallel.hpp"

namespace lhy {

namespace {
std::mutex g_fftw_mutex;
}

void KernelParams::validate() const {
  if (N < 2) throw ConfigError("N must be >= 2");
  if (!(kappa > 0.0 && kappa < 2.0 / 3.0)) throw ConfigError("kappa must lie in (0, 2/3)");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(epsilon < epsilon_bound()))
    throw DomainError("epsilon must be < (2 - 3 kappa)/7 = " + std::to_string(epsilon_bound()));
  if (!(delta < delta_bound()))
    throw DomainError("delta must be < (2 - 3 kappa - 7 epsilon)/2 = " + std::to_string(delta_bound()));
}

double KernelParams::L() const { return std::pow(Nd(), 1.0 - kappa); }
double KernelParams::ell_sigma() const { return std::pow(Nd(), -kappa / 2.0 + epsilon); }
double KernelParams::ell_eta() const { return std::pow(Nd(), -1.0 + kappa + epsilon); }
double KernelParams::ell_B() const { return std::pow(Nd(), -kappa / 2.0 + 2.0 * epsilon); }
int KernelParams::n_cutoff() const { return static_cast<int>(std::ceil(1.0 / delta + 1.0 / (delta * delta))); }

double chi_l(double x) {
  if (x <= 1.0) return 0.0;
  if (x >= 2.0) return 1.0;
  auto h = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = h(x - 1.0), b = h(2.0 - x);
  return a / (a + b);
}

KernelModel::KernelModel(KernelParams params, std::shared_ptr<const Scattering> scat)
    : params_(params), scat_(std::move(scat)) {
  params_.validate();
  L_ = params_.L();
  Nk_ = std::pow(params_.Nd(), params_.kappa);
  ell_sigma_ = params_.ell_sigma();
  ell_eta_ = params_.ell_eta();
}

double KernelModel::eta_inf(double p) const {
  if (p == 0.0) return 0.0;
  return -Nk_ * vf_hat(p) / (2.0 * p * p);
}

double KernelModel::mu_inf(double p) const {
  const double e = eta_inf(p);
  if (!(1.0 - 4.0 * e > 0.0)) throw DomainError("1 - 4 eta_infty <= 0 at |p| = " + std::to_string(p));
  return -0.25 * std::log1p(-4.0 * e);
}

double KernelModel::gamma_inf_m1(double p) const {
  const double s = std::sinh(0.5 * mu_inf(p));
  return 2.0 * s * s;
}

double KernelModel::gamma_m1(double p) const {
  const double s = std::sinh(0.5 * mu(p));
  return 2.0 * s * s;
}

const std::vector<double>& KernelSet::values(KernelId id) const {
  switch (id) {
    case KernelId::eta_infty: return eta_infty;
    case KernelId::mu_infty: return mu_infty;
    case KernelId::sigma_infty: return sigma_infty;
    case KernelId::gamma_infty: return gamma_infty;
    case KernelId::eta: return eta;
    case KernelId::mu: return mu;
    case KernelId::sigma: return sigma;
    case KernelId::gamma: return gamma;
  }
  return eta;
}

double KernelSet::tail_start() const {
  return 2.0 * pi * std::sqrt(static_cast<double>(shells->max_n()) + 0.5);
}

double KernelSet::lattice_total(const std::function<double(double)>& g, double s_remainder) const {
  const double body =
      radial_lattice_sum([&](std::int64_t, double p) { return g(p); }, *shells).sum;
  const double P = tail_start();
  const double L = model->L();
  const double P_end = std::max(P, 400.0 * L);
  const double panel = std::max(2.0 * pi, 0.25 * L);
  return body + continuum_tail(g, P, P_end, panel, s_remainder);
}

std::int64_t kernel_max_shell(const KernelParams& params, double a) {
  const double P = 16.0 * params.L();
  const auto n_box = static_cast<std::int64_t>(std::floor(std::pow(P / (2.0 * pi), 2)));
  return std::max(n_box, default_max_shell(a, params.Nd(), params.kappa));
}

KernelSet build_kernel_set(const KernelParams& params, std::shared_ptr<const Scattering> scat,
                           SharedShells shells) {
  KernelSet k;
  k.model = std::make_shared<const KernelModel>(params, std::move(scat));
  k.shells = std::move(shells);
  const auto n = static_cast<std::size_t>(k.shells->max_n()) + 1;
  for (auto* v : {&k.eta_infty, &k.mu_infty, &k.sigma_infty, &k.gamma_infty, &k.eta, &k.mu, &k.sigma, &k.gamma})
    v->assign(n, 0.0);
  const auto& m = *k.model;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = ShellTable::radius(static_cast<std::int64_t>(i));
    const double e = m.eta_inf(p);
    if (!(1.0 - 4.0 * e > 0.0))
      throw DomainError("1 - 4 eta_infty <= 0 on shell n = " + std::to_string(i));
    const double mu_inf = -0.25 * std::log1p(-4.0 * e);
    k.eta_infty[i] = e;
    k.mu_infty[i] = mu_inf;
    k.sigma_infty[i] = std::sinh(mu_inf);
    k.gamma_infty[i] = std::cosh(mu_inf);
    k.eta[i] = e * m.chi_tilde(p);
    k.mu[i] = mu_inf * m.chi(p);
    k.sigma[i] = std::sinh(k.mu[i]);
    k.gamma[i] = std::cosh(k.mu[i]);
  }
  return k;
}

void KernelSet::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out.precision(17);
  out << "n,|p|,eta_infty,mu_infty,sigma_infty,gamma_infty,eta,mu,sigma,gamma\n";
  for (auto n : shells->occupied()) {
    const auto i = static_cast<std::size_t>(n);
    out << n << ',' << ShellTable::radius(n) << ',' << eta_infty[i] << ',' << mu_infty[i] << ',' << sigma_infty[i]
        << ',' << gamma_infty[i] << ',' << eta[i] << ',' << mu[i] << ',' << sigma[i] << ',' << gamma[i] << '\n';
  }
}

std::vector<NormEntry> verify_norm_bounds(const KernelSet& k) {
  const auto& m = *k.model;
  const double kap = m.params().kappa, eps = m.params().epsilon;
  std::vector<NormEntry> out;
  double sup_sigma = 0.0, sup_g1 = 0.0, sup_eta = 0.0;
  for (auto n : k.shells->occupied()) {
    const auto i = static_cast<std::size_t>(n);
    sup_sigma = std::max(sup_sigma, std::abs(k.sigma[i]));
    sup_g1 = std::max(sup_g1, std::abs(m.gamma_m1(ShellTable::radius(n))));
    sup_eta = std::max(sup_eta, std::abs(k.eta[i]));
  }
  auto total = [&](auto f, double s = 4.0) { return k.lattice_total(f, s); };
  out.push_back({"sigma_sup", sup_sigma, eps / 2.0});
  out.push_back({"sigma_l2sq", total([&](double p) { return std::pow(m.sigma(p), 2); }, 8.0), 1.5 * kap});
  out.push_back({"sigma_l1", total([&](double p) { return std::abs(m.sigma(p)); }), 1.0});
  out.push_back({"gamma_m1_sup", sup_g1, eps / 2.0});
  out.push_back({"gamma_m1_l2sq", total([&](double p) { return std::pow(m.gamma_m1(p), 2); }, 16.0), 1.5 * kap});
  out.push_back({"gamma_m1_l1", total([&](double p) { return std::abs(m.gamma_m1(p)); }, 8.0), 1.0});
  out.push_back({"sigma_infty_l2sq", total([&](double p) { return std::pow(m.sigma_inf(p), 2); }, 8.0), 1.5 * kap});
  out.push_back({"eta_sup", sup_eta, 3.0 * kap - 2.0 + 2.0 * eps});
  out.push_back({"eta_l2sq", total([&](double p) { return std::pow(m.eta(p), 2); }, 8.0), 3.0 * kap - 1.0 + eps});
  out.push_back({"eta_l1", total([&](double p) { return std::abs(m.eta(p)); }), 1.0});
  out.push_back({"eta_minus_eta_infty_l1",
                 total([&](double p) { return std::abs(m.eta(p) - m.eta_inf(p)); }), 1.0 - eps});
  out.push_back({"sigma_minus_sigma_infty_l1",
                 total([&](double p) { return std::abs(m.sigma(p) - m.sigma_inf(p)); }), 1.5 * kap - eps});
  out.push_back({"gamma_sigma_infty_minus_eta_infty_l1", total([&](double p) {
                   const double mu = m.mu_inf(p);
                   // gamma sigma - eta = eta (1/sqrt(1 - 4 eta) - 1), free of cancellation
                   const double e = m.eta_inf(p);
                   return std::abs(e * std::expm1(2.0 * mu));
                 }, 8.0),
                 1.5 * kap});
  return out;
}

double gamma_sigma_bound_excess(const KernelSet& k) {
  double worst = -std::numeric_limits<double>::infinity();
  for (auto n : k.shells->occupied()) {
    const auto i = static_cast<std::size_t>(n);
    const double s = std::sinh(0.5 * k.mu_infty[i]);
    worst = std::max(worst, 2.0 * s * s - std::abs(k.sigma_infty[i]));
  }
  return worst;
}

IdentityResiduals kernel_identities(const KernelSet& k) {
  IdentityResiduals r{};
  const auto& m = *k.model;
  for (auto n : k.shells->occupied()) {
    const auto i = static_cast<std::size_t>(n);
    const double g = k.gamma_infty[i], s = k.sigma_infty[i], e = k.eta_infty[i];
    const double root = std::sqrt(1.0 - 4.0 * e);
    r.hyperbolic_infty = std::max(r.hyperbolic_infty, std::abs(g * g - s * s - 1.0) / (g * g));
    const double gc = k.gamma[i], sc = k.sigma[i];
    r.hyperbolic_cut = std::max(r.hyperbolic_cut, std::abs(gc * gc - sc * sc - 1.0) / (gc * gc));
    r.product = std::max(r.product, std::abs(g * s * root - e) / (1.0 + std::abs(e)));
    r.square = std::max(r.square, std::abs(2.0 * s * s * root - (1.0 - 2.0 * e - root)) / (1.0 + std::abs(e)));
    if (n > 0) {
      const double p = ShellTable::radius(n);
      const double x = m.Nk() * m.vf_hat(p);
      r.tanh = std::max(r.tanh, std::abs(std::tanh(2.0 * k.mu_infty[i]) + x / (p * p + x)));
    }
  }
  return r;
}

// ---- position space --------------------------------------------------------

double PositionKernel::radius(int i, int j, int k) const {
  auto wrap = [&](int a) {
    const int b = a > M / 2 ? a - M : a;
    return static_cast<double>(b) / M;
  };
  const double x = wrap(i), y = wrap(j), z = wrap(k);
  return std::sqrt(x * x + y * y + z * z);
}

namespace {

PositionKernel transform_modes(const std::function<double(std::int64_t)>& coeff, int M, double total_l1) {
  if (M < 4 || M % 2 != 0) throw ConfigError("position grid M must be even and >= 4");
  const int K = M / 2 - 1;
  const std::size_t sz = static_cast<std::size_t>(M) * M * M;
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * sz));
  std::fill(reinterpret_cast<double*>(buf), reinterpret_cast<double*>(buf) + 2 * sz, 0.0);
  auto idx = [M](int a) { return a < 0 ? a + M : a; };
  double kept_l1 = 0.0;
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int c = -K; c <= K; ++c) {
        const double v = coeff(static_cast<std::int64_t>(a) * a + b * b + c * c);
        kept_l1 += std::abs(v);
        buf[(static_cast<std::size_t>(idx(a)) * M + idx(b)) * M + idx(c)][0] = v;
      }
  fftw_plan plan;
  {
    std::lock_guard lock(g_fftw_mutex);
    plan = fftw_plan_dft_3d(M, M, M, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(g_fftw_mutex);
    fftw_destroy_plan(plan);
  }
  PositionKernel pk;
  pk.M = M;
  pk.values.resize(sz);
  for (std::size_t i = 0; i < sz; ++i) {
    pk.values[i] = buf[i][0];
    pk.imag_residue = std::max(pk.imag_residue, std::abs(buf[i][1]));
  }
  fftw_free(buf);
  pk.dropped_l1 = std::max(0.0, total_l1 - kept_l1);
  return pk;
}

}  // namespace

PositionKernel position_transform(const KernelSet& k, PositionWhich which, int M) {
  const auto& m = *k.model;
  std::function<double(double)> f;
  switch (which) {
    case PositionWhich::sigma: f = [&](double p) { return m.sigma(p); }; break;
    case PositionWhich::gamma_minus_1: f = [&](double p) { return m.gamma_m1(p); }; break;
    case PositionWhich::eta: f = [&](double p) { return m.eta(p); }; break;
  }
  const double l1 = k.lattice_total([&](double p) { return std::abs(f(p)); });
  return transform_modes([&](std::int64_t n) { return f(ShellTable::radius(n)); }, M, l1);
}

PositionKernel position_transform(std::span<const double> per_shell, int M) {
  double l1 = 0.0;
  const auto shells = ShellTable::enumerate(static_cast<std::int64_t>(per_shell.size()) - 1);
  for (auto n : shells.occupied()) l1 += shells.multiplicity(n) * std::abs(per_shell[static_cast<std::size_t>(n)]);
  return transform_modes(
      [&](std::int64_t n) {
        return static_cast<std::size_t>(n) < per_shell.size() ? per_shell[static_cast<std::size_t>(n)] : 0.0;
      },
      M, l1);
}

DecayMeasure verify_decay(const PositionKernel& pk, double ell, int m, double N) {
  if (!(ell > 0.0)) throw DomainError("decay scale must be positive");
  if (1.0 / pk.M > ell) throw ConfigError("position grid too coarse to resolve the decay scale");
  DecayMeasure d;
  d.region_empty = true;
  for (int i = 0; i < pk.M; ++i)
    for (int j = 0; j < pk.M; ++j)
      for (int k = 0; k < pk.M; ++k) {
        const double r = pk.radius(i, j, k);
        if (r < 4.0 * ell) continue;
        d.region_empty = false;
        const double c = std::abs(pk.at(i, j, k)) * std::pow(r / ell, m) / N;
        if (c > d.sup_constant) {
          d.sup_constant = c;
          d.argmax_radius = r;
        }
      }
  return d;
}

double gradient_tail(const KernelSet& k, double r, int M) {
  if (!(r >= 1.0 / M)) throw ConfigError("gradient_tail radius below grid resolution");
  const auto& m = *k.model;
  const int K = M / 2 - 1;
  const std::size_t sz = static_cast<std::size_t>(M) * M * M;
  auto idx = [M](int a) { return a < 0 ? a + M : a; };
  std::vector<double> g2(sz, 0.0);
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * sz));
  fftw_plan plan;
  {
    std::lock_guard lock(g_fftw_mutex);
    plan = fftw_plan_dft_3d(M, M, M, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (int axis = 0; axis < 3; ++axis) {
    std::fill(reinterpret_cast<double*>(buf), reinterpret_cast<double*>(buf) + 2 * sz, 0.0);
    for (int a = -K; a <= K; ++a)
      for (int b = -K; b <= K; ++b)
        for (int c = -K; c <= K; ++c) {
          const int comp[3] = {a, b, c};
          const double p = 2.0 * pi * std::sqrt(static_cast<double>(a * a + b * b + c * c));
          // i p_axis sigma_p
          buf[(static_cast<std::size_t>(idx(a)) * M + idx(b)) * M + idx(c)][1] = 2.0 * pi * comp[axis] * m.sigma(p);
        }
    fftw_execute(plan);
    for (std::size_t i = 0; i < sz; ++i) g2[i] += buf[i][0] * buf[i][0] + buf[i][1] * buf[i][1];
  }
  {
    std::lock_guard lock(g_fftw_mutex);
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  PositionKernel shape;
  shape.M = M;
  CompensatedSum s;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int c = 0; c < M; ++c)
        if (shape.radius(i, j, c) >= r) s.add(g2[(static_cast<std::size_t>(i) * M + j) * M + c]);
  return s.value() / static_cast<double>(sz);
}

}  // namespace lhy
