#include "lhy/potential.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lhy/interp.hpp"

namespace lhy {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto* b = s.data();
  const auto* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e) throw ConfigError("bad number in potential spec: '" + std::string(s) + "'");
  return v;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  while (!s.empty()) {
    const auto c = s.find(',');
    out.push_back(parse_number(s.substr(0, c)));
    if (c == std::string_view::npos) break;
    s.remove_prefix(c + 1);
  }
  return out;
}

}  // namespace

RadialPotential::RadialPotential(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [&](const SquareBarrier& s) {
                   if (!(s.R > 0.0)) throw DomainError("square barrier needs R > 0");
                   if (s.V0 < 0.0) throw DomainError("potential must be non-negative (V0 < 0)");
                   support_ = s.R;
                   zero_ = s.V0 == 0.0;
                 },
                 [&](const GaussianTruncated& g) {
                   if (!(g.R > 0.0) || !(g.width > 0.0))
                     throw DomainError("gaussian potential needs width > 0 and R > 0");
                   if (g.V0 < 0.0) throw DomainError("potential must be non-negative (V0 < 0)");
                   support_ = g.R;
                   zero_ = g.V0 == 0.0;
                 },
                 [&](const Tabulated& t) {
                   if (t.r.size() < 2 || t.r.size() != t.V.size())
                     throw DomainError("tabulated potential needs >= 2 matching samples");
                   if (!std::is_sorted(t.r.begin(), t.r.end()) || t.r.front() < 0.0)
                     throw DomainError("tabulated radii must be ascending and non-negative");
                   for (double v : t.V)
                     if (v < 0.0) throw DomainError("potential must be non-negative (tabulated sample < 0)");
                   support_ = t.r.back();
                   zero_ = std::all_of(t.V.begin(), t.V.end(), [](double v) { return v == 0.0; });
                 },
             },
             kind_);
}

RadialPotential RadialPotential::square_barrier(double V0, Length R) {
  return RadialPotential(SquareBarrier{V0, R.value});
}

RadialPotential RadialPotential::gaussian_truncated(double V0, Length width, Length R) {
  return RadialPotential(GaussianTruncated{V0, width.value, R.value});
}

RadialPotential RadialPotential::tabulated(std::vector<double> r, std::vector<double> V) {
  return RadialPotential(Tabulated{std::move(r), std::move(V)});
}

RadialPotential RadialPotential::zero() { return RadialPotential(SquareBarrier{0.0, 1.0}); }

RadialPotential RadialPotential::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (kind == "zero") return zero();
  if (kind == "square_barrier" || kind == "square") {
    const auto v = parse_list(args);
    if (v.size() != 2) throw ConfigError("square_barrier expects V0,R");
    return square_barrier(v[0], Length{v[1]});
  }
  if (kind == "gaussian" || kind == "gaussian_truncated") {
    const auto v = parse_list(args);
    if (v.size() != 3) throw ConfigError("gaussian expects V0,width,R");
    return gaussian_truncated(v[0], Length{v[1]}, Length{v[2]});
  }
  if (kind == "tabulated") {
    std::ifstream in{std::string(args)};
    if (!in) throw ConfigError("cannot open tabulated potential file '" + std::string(args) + "'");
    std::vector<double> r, V;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ss(line);
      double a = 0, b = 0;
      if (ss >> a >> b) {
        r.push_back(a);
        V.push_back(b);
      }
    }
    return tabulated(std::move(r), std::move(V));
  }
  throw ConfigError("unknown potential kind '" + std::string(kind) + "'");
}

double RadialPotential::operator()(double r) const {
  if (r > support_) return 0.0;
  return std::visit(overloaded{
                        [&](const SquareBarrier& s) { return s.V0; },
                        [&](const GaussianTruncated& g) { return g.V0 * std::exp(-r * r / (2.0 * g.width * g.width)); },
                        [&](const Tabulated& t) {
                          if (r <= t.r.front()) return t.V.front();
                          const auto it = std::upper_bound(t.r.begin(), t.r.end(), r);
                          if (it == t.r.end()) return t.V.back();
                          const auto i = static_cast<std::size_t>(it - t.r.begin());
                          const double s = (r - t.r[i - 1]) / (t.r[i] - t.r[i - 1]);
                          return t.V[i - 1] + s * (t.V[i] - t.V[i - 1]);
                        },
                    },
                    kind_);
}

std::string RadialPotential::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const SquareBarrier& s) {
                   if (zero_)
                     os << "zero";
                   else
                     os << "square_barrier:" << s.V0 << "," << s.R;
                 },
                 [&](const GaussianTruncated& g) { os << "gaussian:" << g.V0 << "," << g.width << "," << g.R; },
                 [&](const Tabulated& t) { os << "tabulated[" << t.r.size() << "]"; },
             },
             kind_);
  return os.str();
}

namespace {

struct Rk4Run {
  std::vector<double> u, up;
  double h;
};

Rk4Run integrate_interior(const RadialPotential& V, int n) {
  const double R = V.support_radius();
  const double h = R / n;
  Rk4Run run{std::vector<double>(static_cast<std::size_t>(n) + 1), std::vector<double>(static_cast<std::size_t>(n) + 1), h};
  double u = 0.0, v = 1.0;
  run.u[0] = u;
  run.up[0] = v;
  for (int k = 0; k < n; ++k) {
    const double r = k * h;
    // The last stage sits exactly on R, where V takes its inside value.
    const double V0 = 0.5 * V(r);
    const double Vh = 0.5 * V(std::min(r + 0.5 * h, R));
    const double V1 = 0.5 * V(std::min(r + h, R));
    const double k1u = v, k1v = V0 * u;
    const double k2u = v + 0.5 * h * k1v, k2v = Vh * (u + 0.5 * h * k1u);
    const double k3u = v + 0.5 * h * k2v, k3v = Vh * (u + 0.5 * h * k2u);
    const double k4u = v + h * k3v, k4v = V1 * (u + h * k3u);
    u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if (!std::isfinite(u) || !std::isfinite(v)) throw ConvergenceError("zero-energy integration diverged");
    run.u[static_cast<std::size_t>(k) + 1] = u;
    run.up[static_cast<std::size_t>(k) + 1] = v;
  }
  return run;
}

double scattering_length_of(const Rk4Run& run, double R) { return R - run.u.back() / run.up.back(); }

}  // namespace

ScatteringSolution solve_zero_energy(const RadialPotential& V, const GridSpec& grid) {
  if (grid.intervals < 8 || grid.intervals % 2 != 0) throw ConfigError("grid intervals must be even and >= 8");
  if (!(grid.extent_factor > 1.0)) throw ConfigError("grid extent must exceed the support radius");
  const double R = V.support_radius();
  const int n = grid.intervals;
  const Rk4Run fine = integrate_interior(V, n);
  const Rk4Run coarse = integrate_interior(V, n / 2);

  ScatteringSolution sol;
  sol.support_radius = R;
  sol.step = fine.h;
  sol.a = scattering_length_of(fine, R);
  sol.step_doubling_delta = std::abs(sol.a - scattering_length_of(coarse, R));
  if (sol.step_doubling_delta > 1e-6 * R)
    throw ConvergenceError("zero-energy solve not converged: a changes by " +
                           std::to_string(sol.step_doubling_delta) + " under step doubling");

  const double c = fine.up.back();  // exterior u = c (r - a)
  const int n_ext = static_cast<int>(std::ceil(grid.extent_factor * n));
  sol.r.resize(static_cast<std::size_t>(n_ext) + 1);
  sol.f.resize(sol.r.size());
  sol.w.resize(sol.r.size());
  sol.fprime.resize(sol.r.size());
  for (int k = 0; k <= n_ext; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double r = k * fine.h;
    sol.r[i] = r;
    if (k == 0) {
      sol.f[i] = 1.0 / c;
      sol.fprime[i] = 0.0;
    } else if (k <= n) {
      sol.f[i] = fine.u[i] / (c * r);
      sol.fprime[i] = (fine.up[i] * r - fine.u[i]) / (c * r * r);
    } else {
      sol.f[i] = 1.0 - sol.a / r;
      sol.fprime[i] = sol.a / (r * r);
    }
    sol.w[i] = 1.0 - sol.f[i];
  }
  for (double f : sol.f)
    if (f < -1e-12 || f > 1.0 + 1e-12) throw DomainError("scattering solution left [0, 1]");
  return sol;
}

double ScatteringSolution::f_at(double rho) const {
  if (rho >= support_radius) return rho > 0.0 ? 1.0 - a / rho : 1.0;
  if (rho <= 0.0) return f.front();
  // cubic Hermite on (f, f') inside the support
  const double t = rho / step;
  auto k = static_cast<std::size_t>(t);
  if (k + 1 >= r.size()) k = r.size() - 2;
  const double s = t - static_cast<double>(k);
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * f[k] + h10 * step * fprime[k] + h01 * f[k + 1] + h11 * step * fprime[k + 1];
}

double ScatteringSolution::w_at(double r) const {
  if (r >= support_radius) return r > 0.0 ? a / r : 0.0;
  return 1.0 - f_at(r);
}

double ScatteringSolution::exterior_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] > support_radius) worst = std::max(worst, std::abs(f[i] - (1.0 - a / r[i])));
  return worst;
}

double radial_fourier(std::span<const double> g, double R, Wavenumber xi) {
  const std::size_t n = g.size() - 1;
  if (n < 2 || n % 2 != 0) throw ConfigError("radial_fourier needs an even number of intervals");
  const double h = R / static_cast<double>(n);
  CompensatedSum s;
  for (std::size_t k = 0; k <= n; ++k) {
    const double r = h * static_cast<double>(k);
    const double x = xi.value * r;
    const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
    const double wgt = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    s.add(wgt * r * r * g[k] * sinc);
  }
  return 4.0 * pi * s.value() * h / 3.0;
}

std::string_view to_string(RadialFunction id) {
  switch (id) {
    case RadialFunction::V: return "V";
    case RadialFunction::Vf: return "Vf";
    case RadialFunction::Vw: return "Vw";
  }
  return "?";
}

RadialFourierTable::RadialFourierTable(RadialFunction id, std::span<const double> g, double R, double dxi,
                                       double xi_max)
    : id_(id), dxi_(dxi), R_(R) {
  const std::size_t n = g.size() - 1;
  if (n < 8 || n % 2 != 0) throw ConfigError("radial table needs an even number (>= 8) of intervals");
  const double h = R / static_cast<double>(n);
  const auto J = static_cast<std::size_t>(std::ceil(xi_max / dxi)) + 8;
  xi_max_ = dxi * static_cast<double>(J - 8);
  values_.resize(J + 1);
  // Simpson weights times r g(r)
  std::vector<double> rg(n + 1), wts(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    rg[k] = h * static_cast<double>(k) * g[k];
    wts[k] = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
  }
  {
    CompensatedSum s;
    for (std::size_t k = 0; k <= n; ++k) s.add(wts[k] * h * static_cast<double>(k) * rg[k]);
    values_[0] = 4.0 * pi * s.value() * h / 3.0;
  }
  for (std::size_t j = 1; j <= J; ++j) {
    const double xi = dxi * static_cast<double>(j);
    const double theta = xi * h;
    const double c2 = 2.0 * std::cos(theta);
    double sm1 = 0.0, s0 = 0.0;  // sin((k-1) theta), sin(k theta)
    double acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == 0) {
        s0 = 0.0;
        sm1 = -std::sin(theta);
      }
      acc += wts[k] * rg[k] * s0;
      const double s1 = c2 * s0 - sm1;
      sm1 = s0;
      s0 = s1;
      // re-anchor the recurrence periodically to bound drift
      if ((k + 1) % 1024 == 0) {
        s0 = std::sin(static_cast<double>(k + 1) * theta);
        sm1 = std::sin(static_cast<double>(k) * theta);
      }
    }
    values_[j] = 4.0 * pi * acc * h / (3.0 * xi);
  }
  value_at_zero_ = values_[0];
  // endpoint derivatives of phi = r g from one-sided stencils
  auto phi = [&](std::size_t k) { return rg[n - k]; };
  phi_R_ = phi(0);
  dphi_R_ = (25 * phi(0) - 48 * phi(1) + 36 * phi(2) - 16 * phi(3) + 3 * phi(4)) / (12 * h);
  d2phi_R_ = (45 * phi(0) - 154 * phi(1) + 214 * phi(2) - 156 * phi(3) + 61 * phi(4) - 10 * phi(5)) / (12 * h * h);
}

double RadialFourierTable::operator()(double xi) const {
  xi = std::abs(xi);
  if (xi <= xi_max_) {
    const double t = xi / dxi_;
    const long n = static_cast<long>(values_.size());
    long j = static_cast<long>(std::floor(t)) - 3;
    if (j + 7 >= n) j = n - 8;
    return lagrange_nodes<8>(t - static_cast<double>(j), [&](int k) {
      long i = j + k;
      if (i < 0) i = -i;
      return values_[static_cast<std::size_t>(i)];
    });
  }
  const double c = std::cos(xi * R_), s = std::sin(xi * R_);
  return 4.0 * pi / xi * (-phi_R_ * c / xi + dphi_R_ * s / (xi * xi) + d2phi_R_ * c / (xi * xi * xi));
}

FourierTables FourierTables::build(const RadialPotential& pot, const ScatteringSolution& sol, double dxi,
                                   double xi_max) {
  const double R = pot.support_radius();
  // interior nodes 0..n share the solution grid
  const auto n = static_cast<std::size_t>(std::llround(R / sol.step));
  std::vector<double> gV(n + 1), gVf(n + 1), gVw(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double v = pot(sol.r[k]);
    gV[k] = v;
    gVf[k] = v * sol.f[k];
    gVw[k] = v * sol.w[k];
  }
  FourierTables t;
  t.V = RadialFourierTable(RadialFunction::V, gV, R, dxi, xi_max);
  t.Vf = RadialFourierTable(RadialFunction::Vf, gVf, R, dxi, xi_max);
  t.Vw = RadialFourierTable(RadialFunction::Vw, gVw, R, dxi, xi_max);
  t.a = sol.a;
  t.R = R;
  return t;
}

ScatteringCheck check_scattering_length(const ScatteringSolution& sol, const RadialPotential& V, double tol) {
  const auto n = static_cast<std::size_t>(std::llround(sol.support_radius / sol.step));
  std::vector<double> gV(n + 1), gVf(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    gV[k] = V(sol.r[k]);
    gVf[k] = gV[k] * sol.f[k];
  }
  ScatteringCheck c{};
  c.eight_pi_a = 8.0 * pi * sol.a;
  c.vf_integral = radial_fourier(gVf, sol.support_radius, Wavenumber{0.0});
  c.v_hat_zero = radial_fourier(gV, sol.support_radius, Wavenumber{0.0});
  if (V.is_zero()) {
    c.residual = std::abs(c.eight_pi_a - c.vf_integral);
    c.strict_inequality = true;
    return c;
  }
  c.residual = std::abs(c.eight_pi_a - c.vf_integral) / c.eight_pi_a;
  c.strict_inequality = c.eight_pi_a < c.v_hat_zero;
  if (c.residual > tol)
    throw ConsistencyError("scattering length identity violated: relative residual " + std::to_string(c.residual));
  if (!c.strict_inequality) throw ConsistencyError("8 pi a < V^(0) violated");
  return c;
}

Scattering Scattering::solve(const RadialPotential& pot, const GridSpec& grid) {
  Scattering s{pot, solve_zero_energy(pot, grid), {}};
  s.tables = FourierTables::build(pot, s.solution);
  return s;
}

}  // namespace lhy
