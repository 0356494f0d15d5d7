#include "lhy/focktoy.hpp"

#include <algorithm>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "lhy/kernels.hpp"

namespace lhy::fock {

namespace {

Label minus(const Label& a) { return {-a[0], -a[1], -a[2]}; }
Label sub(const Label& a, const Label& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

struct Entry {
  std::size_t row, col;
  double value;
};

// Sums duplicates in value order, so (i, j) and (j, i) built from adjoint
// term sets come out bit-identical.
SparseOp assemble(std::size_t dim, std::vector<Entry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    return a.value < b.value;
  });
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < entries.size();) {
    double s = 0.0;
    std::size_t j = i;
    for (; j < entries.size() && entries[j].row == entries[i].row && entries[j].col == entries[i].col; ++j)
      s += entries[j].value;
    t.emplace_back(static_cast<int>(entries[i].row), static_cast<int>(entries[i].col), s);
    i = j;
  }
  SparseOp m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void add_word(std::vector<Entry>& out, const FockBasis& b, std::size_t i, std::initializer_list<Ladder> word,
              double coefficient) {
  if (coefficient == 0.0) return;
  const std::vector<Ladder> w(word);
  if (auto r = apply_word(b, i, w)) out.push_back({r->first, i, coefficient * std::sqrt(static_cast<double>(r->second))});
}

}  // namespace

ToyModeSet::ToyModeSet(std::vector<Label> labels, std::function<double(const Label&)> v_hat,
                       std::optional<std::vector<double>> energies)
    : labels_(std::move(labels)), v_hat_(std::move(v_hat)) {
  if (energies) {
    if (energies->size() != labels_.size()) throw ConfigError("one energy per mode required");
    energy_ = *energies;
  } else {
    for (const auto& k : labels_) energy_.push_back(4.0 * pi * pi * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const auto n = find(minus(labels_[i]));
    if (!n) throw ConfigError("mode set must be closed under negation");
    neg_.push_back(*n);
  }
}

std::optional<int> ToyModeSet::find(const Label& k) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == k) return static_cast<int>(i);
  return std::nullopt;
}

ToyModeSet pair_mode_set(int pairs, std::function<double(const Label&)> v_hat) {
  std::vector<Label> labels{{0, 0, 0}};
  for (int i = 0; i < pairs; ++i) {
    Label k{0, 0, 0};
    k[static_cast<std::size_t>(i % 3)] = 1 + i / 3;
    labels.push_back(k);
    labels.push_back(minus(k));
  }
  return ToyModeSet(std::move(labels), std::move(v_hat));
}

// ---- basis --------------------------------------------------------------------

FockBasis FockBasis::build(std::vector<int> n_max, int N_max, const ToyModeSet* zero_momentum_of, std::size_t cap) {
  if (N_max < 0) throw ConfigError("N_max must be >= 0");
  for (int n : n_max)
    if (n < 0) throw ConfigError("n_max must be >= 0");
  if (zero_momentum_of && zero_momentum_of->size() != static_cast<int>(n_max.size()))
    throw ConfigError("mode set and cutoff list differ in length");
  FockBasis b;
  b.modes_ = static_cast<int>(n_max.size());
  b.N_max_ = N_max;
  b.n_max_ = std::move(n_max);
  double span = 1.0;
  for (int n : b.n_max_) span *= n + 1.0;
  if (span > 1.8e19) throw ConfigError("occupation key does not fit 64 bits");

  std::vector<int> occ(static_cast<std::size_t>(b.modes_), 0);
  Label mom{0, 0, 0};
  auto rec = [&](auto&& self, int m, int left) -> void {
    if (m == b.modes_) {
      if (zero_momentum_of && mom != Label{0, 0, 0}) return;
      if (b.dim_ >= cap) throw ConfigError("Fock basis dimension exceeds cap " + std::to_string(cap));
      for (int v : occ) b.occ_.push_back(static_cast<std::uint16_t>(v));
      b.index_.emplace(b.key(occ), b.dim_++);
      return;
    }
    const int top = std::min(b.n_max_[static_cast<std::size_t>(m)], left);
    for (int n = 0; n <= top; ++n) {
      occ[static_cast<std::size_t>(m)] = n;
      if (zero_momentum_of)
        for (int d = 0; d < 3; ++d) mom[static_cast<std::size_t>(d)] += n * zero_momentum_of->label(m)[static_cast<std::size_t>(d)];
      self(self, m + 1, left - n);
      if (zero_momentum_of)
        for (int d = 0; d < 3; ++d) mom[static_cast<std::size_t>(d)] -= n * zero_momentum_of->label(m)[static_cast<std::size_t>(d)];
    }
    occ[static_cast<std::size_t>(m)] = 0;
  };
  rec(rec, 0, N_max);
  return b;
}

FockBasis FockBasis::build(int modes, int n_max, int N_max, std::size_t cap) {
  return build(std::vector<int>(static_cast<std::size_t>(modes), n_max), N_max, nullptr, cap);
}

std::uint64_t FockBasis::key(std::span<const int> occupation) const {
  std::uint64_t k = 0;
  for (int m = 0; m < modes_; ++m) k = k * static_cast<std::uint64_t>(n_max_[static_cast<std::size_t>(m)] + 1) + static_cast<std::uint64_t>(occupation[static_cast<std::size_t>(m)]);
  return k;
}

int FockBasis::total(std::size_t i) const {
  int t = 0;
  for (int m = 0; m < modes_; ++m) t += occ(i, m);
  return t;
}

std::optional<std::size_t> FockBasis::index(std::span<const int> occupation) const {
  int t = 0;
  for (int m = 0; m < modes_; ++m) {
    const int n = occupation[static_cast<std::size_t>(m)];
    if (n < 0 || n > n_max_[static_cast<std::size_t>(m)]) return std::nullopt;
    t += n;
  }
  if (t > N_max_) return std::nullopt;
  auto it = index_.find(key(occupation));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FockBasis::vacuum() const {
  const std::vector<int> z(static_cast<std::size_t>(modes_), 0);
  auto i = index(z);
  if (!i) throw ConfigError("vacuum not in basis");
  return *i;
}

bool FockBasis::on_boundary(std::size_t i) const {
  if (total(i) == N_max_) return true;
  for (int m = 0; m < modes_; ++m)
    if (occ(i, m) == n_max_[static_cast<std::size_t>(m)]) return true;
  return false;
}

std::optional<std::pair<std::size_t, std::int64_t>> apply_word(const FockBasis& b, std::size_t i,
                                                               std::span<const Ladder> word) {
  std::array<int, 32> occ{};
  if (b.modes() > 32) throw ConfigError("at most 32 modes");
  for (int m = 0; m < b.modes(); ++m) occ[static_cast<std::size_t>(m)] = b.occ(i, m);
  std::int64_t prod = 1;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    int& n = occ[static_cast<std::size_t>(it->mode)];
    if (it->create) {
      ++n;
      prod *= n;
    } else {
      if (n == 0) return std::nullopt;
      prod *= n;
      --n;
    }
  }
  auto j = b.index(std::span<const int>(occ.data(), static_cast<std::size_t>(b.modes())));
  if (!j) return std::nullopt;
  return std::make_pair(*j, prod);
}

// ---- operators ------------------------------------------------------------------

SparseOp annihilation(const FockBasis& b, int mode) {
  std::vector<Entry> e;
  for (std::size_t i = 0; i < b.dim(); ++i) add_word(e, b, i, {{mode, false}}, 1.0);
  return assemble(b.dim(), e);
}

SparseOp mode_number(const FockBasis& b, int mode) {
  std::vector<Entry> e;
  for (std::size_t i = 0; i < b.dim(); ++i)
    if (b.occ(i, mode) > 0) e.push_back({i, i, static_cast<double>(b.occ(i, mode))});
  return assemble(b.dim(), e);
}

SparseOp number_operator(const FockBasis& b) {
  std::vector<Entry> e;
  for (std::size_t i = 0; i < b.dim(); ++i)
    if (b.total(i) > 0) e.push_back({i, i, static_cast<double>(b.total(i))});
  return assemble(b.dim(), e);
}

SparseOp toy_hamiltonian(const ToyModeSet& m, double N, double kappa, const FockBasis& b) {
  if (m.size() != b.modes()) throw ConfigError("mode set and basis differ");
  const double c = std::pow(N, kappa) / (2.0 * N);
  // (p, q, s = p + r, t = q - r) with all four in the set
  struct Term {
    int p, q, s, t;
    double v;
  };
  std::vector<Term> terms;
  for (int p = 0; p < m.size(); ++p)
    for (int q = 0; q < m.size(); ++q)
      for (int s = 0; s < m.size(); ++s) {
        const Label r = sub(m.label(s), m.label(p));
        const auto t = m.find(sub(m.label(q), r));
        if (!t) continue;
        const double v = m.v(r);
        if (v != 0.0) terms.push_back({p, q, s, *t, c * v});
      }
  std::vector<Entry> e;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    double kin = 0.0;
    for (int k = 0; k < m.size(); ++k) kin += m.energy(k) * b.occ(i, k);
    if (kin != 0.0) e.push_back({i, i, kin});
    for (const auto& tm : terms) add_word(e, b, i, {{tm.s, true}, {tm.t, true}, {tm.q, false}, {tm.p, false}}, tm.v);
  }
  return assemble(b.dim(), e);
}

SparseOp quadratic_toy_hamiltonian(const ToyModeSet& m, double N, double kappa, double N0, const FockBasis& b) {
  const double c = std::pow(N, kappa) * N0 / (2.0 * N);
  const auto z = m.zero_mode();
  std::vector<Entry> e;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    double diag = 0.0;
    for (int p = 0; p < m.size(); ++p) {
      if (z && p == *z) continue;
      const double v = c * m.v(m.label(p));
      diag += (m.energy(p) + 2.0 * v) * b.occ(i, p);
      add_word(e, b, i, {{p, true}, {m.negation(p), true}}, v);
      add_word(e, b, i, {{p, false}, {m.negation(p), false}}, v);
    }
    if (diag != 0.0) e.push_back({i, i, diag});
  }
  return assemble(b.dim(), e);
}

SparseOp weyl_generator(const FockBasis& b, int mode0, double N0) {
  if (N0 < 0.0) throw DomainError("N0 must be >= 0");
  const double s = std::sqrt(N0);
  std::vector<Entry> e;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    add_word(e, b, i, {{mode0, true}}, s);
    add_word(e, b, i, {{mode0, false}}, -s);
  }
  return assemble(b.dim(), e);
}

SparseOp bogoliubov_generator(const ToyModeSet& m, std::span<const double> mu, const FockBasis& b) {
  const auto z = m.zero_mode();
  std::vector<Entry> e;
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (int p = 0; p < m.size(); ++p) {
      if (z && p == *z) continue;
      const double h = 0.5 * mu[static_cast<std::size_t>(p)];
      add_word(e, b, i, {{p, true}, {m.negation(p), true}}, h);
      add_word(e, b, i, {{p, false}, {m.negation(p), false}}, -h);
    }
  return assemble(b.dim(), e);
}

SparseOp cubic_A(const ToyModeSet& m, std::span<const double> eta, std::span<const double> sigma, double N,
                 const FockBasis& b) {
  const double c = 1.0 / std::sqrt(N);
  std::vector<Entry> e;
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (int p = 0; p < m.size(); ++p)
      for (int q = 0; q < m.size(); ++q) {
        const Label pq{m.label(p)[0] + m.label(q)[0], m.label(p)[1] + m.label(q)[1], m.label(p)[2] + m.label(q)[2]};
        const auto s = m.find(pq);
        if (!s) continue;
        add_word(e, b, i, {{*s, false}, {m.negation(p), false}, {m.negation(q), false}},
                 c * eta[static_cast<std::size_t>(p)] * sigma[static_cast<std::size_t>(q)]);
      }
  return assemble(b.dim(), e);
}

double theta_profile(double x) { return 1.0 - chi_l(x); }

SparseOp cubic_generator(const SparseOp& A, int M, const FockBasis& b) {
  if (M < 1) throw ConfigError("cutoff level must be >= 1");
  if (b.N_max() <= M + 3) throw ConfigError("basis N_max must exceed M + 3");
  Eigen::VectorXd th(static_cast<Eigen::Index>(b.dim()));
  for (std::size_t i = 0; i < b.dim(); ++i) th[static_cast<Eigen::Index>(i)] = theta_profile(static_cast<double>(b.total(i)) / M);
  const SparseOp At = A.transpose();
  const SparseOp G = th.asDiagonal() * At - A * th.asDiagonal();
  return G;
}

DenseOp expm(const SparseOp& G) {
  const DenseOp d(G);
  return d.exp();
}

State expm_apply(const SparseOp& G, const State& v) {
  // max row sum bounds the step norm
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(G.rows());
  for (int k = 0; k < G.outerSize(); ++k)
    for (SparseOp::InnerIterator it(G, k); it; ++it) rows[it.row()] += std::abs(it.value());
  const double bound = rows.size() ? rows.maxCoeff() : 0.0;
  const int steps = std::max(1, static_cast<int>(std::ceil(bound / 0.5)));
  const double h = 1.0 / steps;
  State x = v;
  for (int s = 0; s < steps; ++s) {
    State term = x, sum = x;
    for (int k = 1; k < 80; ++k) {
      term = (G * term) * (h / k);
      sum += term;
      if (term.norm() <= 1e-18 * sum.norm()) break;
    }
    x = sum;
  }
  return x;
}

DenseOp weyl_displace(const FockBasis& b, int mode0, double N0) { return expm(weyl_generator(b, mode0, N0)); }

DenseOp bogoliubov_unitary(const ToyModeSet& m, std::span<const double> mu, const FockBasis& b) {
  return expm(bogoliubov_generator(m, mu, b));
}

DenseOp cutoff_cubic_unitary(const SparseOp& A, int M, const FockBasis& b) {
  DenseOp U = expm(cubic_generator(A, M, b));
  const double d = unitarity_defect(U);
  if (d > 1e-10) throw ConvergenceError("cutoff cubic unitary defect " + std::to_string(d));
  return U;
}

double unitarity_defect(const DenseOp& U) {
  return (U.transpose() * U - DenseOp::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const SparseOp& H) {
  const SparseOp D = H - SparseOp(H.transpose());
  double m = 0.0;
  for (int k = 0; k < D.outerSize(); ++k)
    for (SparseOp::InnerIterator it(D, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double ccr_defect(const FockBasis& b) {
  double worst = 0.0;
  for (int p = 0; p < b.modes(); ++p)
    for (int q = 0; q < b.modes(); ++q) {
      const SparseOp ap = annihilation(b, p), aq = annihilation(b, q);
      const SparseOp aqt = aq.transpose();
      SparseOp C = ap * aqt - aqt * ap;
      for (std::size_t j = 0; j < b.dim(); ++j) {
        if (b.on_boundary(j)) continue;
        for (std::size_t i = 0; i < b.dim(); ++i) {
          const double want = (p == q && i == j) ? 1.0 : 0.0;
          worst = std::max(worst, std::abs(C.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - want));
        }
      }
    }
  return worst;
}

// ---- oracles --------------------------------------------------------------------

double OracleResult::relative_gap() const {
  const double s = std::max(std::abs(exact), std::abs(analytic));
  return s == 0.0 ? 0.0 : std::abs(exact - analytic) / s;
}

namespace {

State dressed_state(const ToyModeSet& m, const ToyKernels& k, double N0, const FockBasis& b, const State& xi) {
  State psi = expm_apply(bogoliubov_generator(m, k.mu, b), xi);
  if (N0 > 0.0) {
    const auto z = m.zero_mode();
    if (!z) throw ConfigError("Weyl shift needs a zero mode");
    psi = expm_apply(weyl_generator(b, *z, N0), psi);
  }
  return psi;
}

double boundary_mass(const FockBasis& b, const State& psi) {
  double w = 0.0;
  for (std::size_t i = 0; i < b.dim(); ++i)
    if (b.on_boundary(i)) w += psi[static_cast<Eigen::Index>(i)] * psi[static_cast<Eigen::Index>(i)];
  return w;
}

State vacuum_state(const FockBasis& b) {
  State v = State::Zero(static_cast<Eigen::Index>(b.dim()));
  v[static_cast<Eigen::Index>(b.vacuum())] = 1.0;
  return v;
}

}  // namespace

OracleResult trial_state_energy_oracle(const ToyModeSet& m, const ToyKernels& k, double N, double kappa, double N0,
                                       const FockBasis& b) {
  if (static_cast<int>(k.mu.size()) != m.size()) throw ConfigError("one mu per mode required");
  const State psi = dressed_state(m, k, N0, b, vacuum_state(b));
  const SparseOp H = toy_hamiltonian(m, N, kappa, b);
  OracleResult r;
  r.exact = psi.dot(H * psi);
  r.boundary_mass = boundary_mass(b, psi);

  const double c = std::pow(N, kappa) / N;
  const Label zero{0, 0, 0};
  std::vector<double> s(static_cast<std::size_t>(m.size())), g(s.size());
  for (int p = 0; p < m.size(); ++p) {
    s[static_cast<std::size_t>(p)] = std::sinh(k.mu[static_cast<std::size_t>(p)]);
    g[static_cast<std::size_t>(p)] = std::cosh(k.mu[static_cast<std::size_t>(p)]);
  }
  CompensatedSum kin, pair, s2, quart;
  for (int p = 0; p < m.size(); ++p) {
    const double sp = s[static_cast<std::size_t>(p)], gp = g[static_cast<std::size_t>(p)];
    kin.add(m.energy(p) * sp * sp);
    pair.add(m.v(m.label(p)) * (gp * sp + sp * sp));
    s2.add(sp * sp);
    for (int q = 0; q < m.size(); ++q) {
      const double sq = s[static_cast<std::size_t>(q)], gq = g[static_cast<std::size_t>(q)];
      quart.add(m.v(sub(m.label(q), m.label(p))) * (sq * gq * gp * sp + sq * sq * sp * sp));
    }
  }
  const double v0 = m.v(zero);
  const double sig2 = s2.value();
  r.analytic = 0.5 * c * N0 * N0 * v0 + kin.value() + c * N0 * pair.value() + c * v0 * N0 * sig2 +
               0.5 * c * quart.value() + 0.5 * c * v0 * sig2 * sig2;
  return r;
}

OracleResult particle_number_check(const ToyModeSet& m, const ToyKernels& k, double N, double N0,
                                   const FockBasis& b, std::optional<CubicFactor> cubic) {
  State xi = vacuum_state(b);
  if (cubic) {
    const SparseOp A = cubic_A(m, k.eta, k.sigma, N, b);
    xi = expm_apply(cubic_generator(A, cubic->M, b), xi);
  }
  const State psi = dressed_state(m, k, N0, b, xi);
  OracleResult r;
  r.exact = psi.dot(number_operator(b) * psi);
  r.boundary_mass = boundary_mass(b, psi);
  CompensatedSum f;
  f.add(N0);
  for (int p = 0; p < m.size(); ++p) {
    const double mu = k.mu[static_cast<std::size_t>(p)];
    const double sp = std::sinh(mu), gp = std::cosh(mu);
    f.add(sp * sp);
    f.add((gp * gp + sp * sp) * xi.dot(mode_number(b, p) * xi));
  }
  r.analytic = f.value();
  return r;
}

std::vector<DrawResult> oracle_draws(int count, std::uint64_t seed, int n_max) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uN0(0.5, 3.0), uv(0.2, 2.0), umu(-0.4, 0.4);
  const double N = 100.0, kappa = 0.5;
  std::vector<DrawResult> out;
  // the basis only depends on the labels
  const ToyModeSet shape = pair_mode_set(2, [](const Label&) { return 0.0; });
  const FockBasis b = FockBasis::build(std::vector<int>(5, n_max), n_max, &shape);
  for (int d = 0; d < count; ++d) {
    DrawResult r;
    r.N0 = uN0(rng);
    r.v0 = uv(rng);
    const double mu1 = umu(rng), mu2 = umu(rng);
    r.mu = {0.0, mu1, mu1, mu2, mu2};
    const double v0 = r.v0;
    const ToyModeSet m = pair_mode_set(2, [v0](const Label&) { return v0; });
    r.result = trial_state_energy_oracle(m, ToyKernels{r.mu, {}, {}}, N, kappa, r.N0, b);
    out.push_back(std::move(r));
  }
  return out;
}

double ground_energy(const SparseOp& H) {
  if (H.rows() > 6000) throw ConfigError("dense eigen solve limited to dimension 6000");
  const DenseOp d(H);
  Eigen::SelfAdjointEigenSolver<DenseOp> es(d, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace lhy::fock
