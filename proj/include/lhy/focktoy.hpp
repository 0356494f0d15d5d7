#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lhy/common.hpp"

namespace lhy::fock {

using Label = std::array<int, 3>;  // momentum 2 pi k
using SparseOp = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using DenseOp = Eigen::MatrixXd;
using State = Eigen::VectorXd;

// Momentum labels closed under negation, with single-particle energies and
// pair interaction v(r) for the momentum transfer r.
class ToyModeSet {
 public:
  ToyModeSet(std::vector<Label> labels, std::function<double(const Label&)> v_hat,
             std::optional<std::vector<double>> energies = std::nullopt);

  int size() const { return static_cast<int>(labels_.size()); }
  const Label& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
  double energy(int i) const { return energy_[static_cast<std::size_t>(i)]; }
  double v(const Label& r) const { return v_hat_(r); }
  std::optional<int> find(const Label& k) const;
  int negation(int i) const { return neg_[static_cast<std::size_t>(i)]; }
  std::optional<int> zero_mode() const { return find({0, 0, 0}); }

 private:
  std::vector<Label> labels_;
  std::vector<double> energy_;
  std::vector<int> neg_;
  std::function<double(const Label&)> v_hat_;
};

// Zero mode plus `pairs` pairs +-e_i (i = 1, 2, 3, then 2 e_1, ...).
ToyModeSet pair_mode_set(int pairs, std::function<double(const Label&)> v_hat);

// Occupation-number basis with per-mode caps and a total-number cap,
// optionally restricted to total momentum zero.
class FockBasis {
 public:
  static FockBasis build(std::vector<int> n_max, int N_max, const ToyModeSet* zero_momentum_of = nullptr,
                         std::size_t cap = 200000);
  static FockBasis build(int modes, int n_max, int N_max, std::size_t cap = 200000);

  std::size_t dim() const { return dim_; }
  int modes() const { return modes_; }
  int n_max(int m) const { return n_max_[static_cast<std::size_t>(m)]; }
  int N_max() const { return N_max_; }
  int occ(std::size_t i, int m) const { return occ_[i * modes_ + m]; }
  int total(std::size_t i) const;
  std::optional<std::size_t> index(std::span<const int> occupation) const;
  std::size_t vacuum() const;
  // states with some mode at its cap or the total at N_max
  bool on_boundary(std::size_t i) const;

 private:
  std::uint64_t key(std::span<const int> occupation) const;

  int modes_ = 0;
  int N_max_ = 0;
  std::size_t dim_ = 0;
  std::vector<int> n_max_;
  std::vector<std::uint16_t> occ_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

struct Ladder {
  int mode;
  bool create;
};

// Applies the word right to left to basis state i. Returns the target state
// and the integer product under the square root of the matrix element, or
// nothing when the word annihilates the state or leaves the basis.
std::optional<std::pair<std::size_t, std::int64_t>> apply_word(const FockBasis& b, std::size_t i,
                                                               std::span<const Ladder> word);

SparseOp annihilation(const FockBasis& b, int mode);
SparseOp number_operator(const FockBasis& b);
SparseOp mode_number(const FockBasis& b, int mode);

// sum_p e_p n_p + N^k/(2N) sum_{p,q,r} v(r) a*_{p+r} a*_{q-r} a_q a_p over
// the terms with all four momenta in the set. Exactly symmetric.
SparseOp toy_hamiltonian(const ToyModeSet& m, double N, double kappa, const FockBasis& b);

// sum_{p != 0} e_p n_p + N^k N0/(2N) sum_{p != 0} v(p) (a*_p a*_-p + a_p a_-p + 2 a*_p a_p)
SparseOp quadratic_toy_hamiltonian(const ToyModeSet& m, double N, double kappa, double N0, const FockBasis& b);

// Anti-symmetric generators.
SparseOp weyl_generator(const FockBasis& b, int mode0, double N0);                       // sqrt(N0)(a0* - a0)
SparseOp bogoliubov_generator(const ToyModeSet& m, std::span<const double> mu, const FockBasis& b);
// A = N^{-1/2} sum_{p,q} eta_p sigma_q a_{p+q} a_{-p} a_{-q}
SparseOp cubic_A(const ToyModeSet& m, std::span<const double> eta, std::span<const double> sigma, double N,
                 const FockBasis& b);
// Theta(n / M) with Theta = 1 on [0, 1], 0 on [2, inf), smooth in between.
double theta_profile(double x);
SparseOp cubic_generator(const SparseOp& A, int M, const FockBasis& b);  // Theta A* - A Theta

DenseOp expm(const SparseOp& G);
// exp(G) v by scaled Taylor steps.
State expm_apply(const SparseOp& G, const State& v);

// exp(sqrt(N0)(a0* - a0)): W* a0 W = a0 + sqrt(N0) away from the cap.
DenseOp weyl_displace(const FockBasis& b, int mode0, double N0);
// exp(1/2 sum mu_p (a*_p a*_-p - a_p a_-p)): U* a_p U = cosh(mu) a_p + sinh(mu) a*_-p.
DenseOp bogoliubov_unitary(const ToyModeSet& m, std::span<const double> mu, const FockBasis& b);
// exp(Theta A* - A Theta); throws ConvergenceError when the unitarity defect exceeds 1e-10.
DenseOp cutoff_cubic_unitary(const SparseOp& A, int M, const FockBasis& b);

double unitarity_defect(const DenseOp& U);   // max |U^T U - I|
double hermiticity_defect(const SparseOp& H);  // max |H - H^T|
// max |([a_p, a_q*] - delta_pq) x| over basis vectors x with every occupation < cap
double ccr_defect(const FockBasis& b);

struct ToyKernels {
  std::vector<double> mu;     // per mode, mu(-p) = mu(p), 0 on the zero mode
  std::vector<double> eta;    // cubic coefficients (used when the cubic factor is on)
  std::vector<double> sigma;
};

struct CubicFactor {
  int M = 3;
};

struct OracleResult {
  double exact = 0.0;
  double analytic = 0.0;
  double boundary_mass = 0.0;  // weight of the state on capped occupations
  double relative_gap() const;
};

// <W U Omega, H W U Omega> from matrices against the closed constant formula
// for the Weyl-plus-Bogoliubov state.
OracleResult trial_state_energy_oracle(const ToyModeSet& m, const ToyKernels& k, double N, double kappa, double N0,
                                       const FockBasis& b);

// <psi, N psi> for psi = W U xi, xi = Omega or the cutoff cubic state,
// against N0 + sum sigma^2 + <xi, sum (gamma^2 + sigma^2) n_p xi>.
OracleResult particle_number_check(const ToyModeSet& m, const ToyKernels& k, double N, double N0,
                                   const FockBasis& b, std::optional<CubicFactor> cubic = std::nullopt);

struct DrawResult {
  double N0, v0;
  std::vector<double> mu;
  OracleResult result;
};

// Randomized family on the zero mode plus two pairs with constant v.
std::vector<DrawResult> oracle_draws(int count, std::uint64_t seed, int n_max = 30);

// Lowest eigenvalue of a symmetric operator.
double ground_energy(const SparseOp& H);

}  // namespace lhy::fock
