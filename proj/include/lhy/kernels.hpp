#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lhy/lattice.hpp"
#include "lhy/potential.hpp"

namespace lhy {

struct KernelParams {
  std::int64_t N = 1000;
  double kappa = 0.5;
  double epsilon = 0.05;
  double delta = 0.05;

  // Throws ConfigError on N < 2 or kappa outside (0, 2/3), DomainError when
  // epsilon or delta violate the strict upper bounds.
  void validate() const;

  double Nd() const { return static_cast<double>(N); }
  double L() const;  // box length N^{1-kappa} in potential units
  double ell_sigma() const;
  double ell_eta() const;
  double ell_B() const;
  int n_cutoff() const;
  double epsilon_bound() const { return (2.0 - 3.0 * kappa) / 7.0; }
  double delta_bound() const { return (2.0 - 3.0 * kappa - 7.0 * epsilon) / 2.0; }
};

// C-infinity step: 0 for x <= 1, 1 for x >= 2.
double chi_l(double x);

// Continuous-|p| evaluation of every kernel. The shell arrays of KernelSet
// are samples of these at |p| = 2 pi sqrt(n).
class KernelModel {
 public:
  KernelModel(KernelParams params, std::shared_ptr<const Scattering> scat);

  const KernelParams& params() const { return params_; }
  const Scattering& scattering() const { return *scat_; }
  std::shared_ptr<const Scattering> scattering_ptr() const { return scat_; }
  double L() const { return L_; }
  double Nk() const { return Nk_; }  // N^kappa

  // transforms at p / L
  double v_hat(double p) const { return scat_->tables.V(p / L_); }
  double vf_hat(double p) const { return scat_->tables.Vf(p / L_); }
  double vw_hat(double p) const { return scat_->tables.Vw(p / L_); }
  double w_hat(double p) const { return 2.0 * vw_hat(p) + vf_hat(p); }  // (2 Vw + Vf)^

  double chi(double p) const { return chi_l(ell_sigma_ * p); }
  double chi_tilde(double p) const { return chi_l(ell_eta_ * p); }

  double eta_inf(double p) const;
  double mu_inf(double p) const;
  double sigma_inf(double p) const { return std::sinh(mu_inf(p)); }
  double gamma_inf(double p) const { return std::cosh(mu_inf(p)); }
  double gamma_inf_m1(double p) const;
  double eta(double p) const { return eta_inf(p) * chi_tilde(p); }
  double mu(double p) const { return mu_inf(p) * chi(p); }
  double sigma(double p) const { return std::sinh(mu(p)); }
  double gamma(double p) const { return std::cosh(mu(p)); }
  double gamma_m1(double p) const;

 private:
  KernelParams params_;
  std::shared_ptr<const Scattering> scat_;
  double L_, Nk_, ell_sigma_, ell_eta_;
};

enum class KernelId { eta_infty, mu_infty, sigma_infty, gamma_infty, eta, mu, sigma, gamma };

struct KernelSet {
  std::shared_ptr<const KernelModel> model;
  SharedShells shells;
  // indexed by shell n; unoccupied shells hold the formula value as well
  std::vector<double> eta_infty, mu_infty, sigma_infty, gamma_infty, eta, mu, sigma, gamma;

  const KernelParams& params() const { return model->params(); }
  const std::vector<double>& values(KernelId id) const;

  // Sum over all of Lambda* of g(|p|): enumerated shells plus a continuum
  // tail integral of the same summand (panels to 400 L, then c |p|^-s).
  double lattice_total(const std::function<double(double)>& g, double s_remainder = 4.0) const;
  // |p| at which the enumerated shells end and the continuum tail starts.
  double tail_start() const;

  void write_csv(const std::string& path) const;
};

// Throws DomainError naming the first shell where 1 - 4 eta_infty <= 0.
KernelSet build_kernel_set(const KernelParams& params, std::shared_ptr<const Scattering> scat,
                           SharedShells shells);

// Shell cutoff covering the transforms of V, Vf, Vw out to 16 times the box
// scale, or the plain default if that is larger.
std::int64_t kernel_max_shell(const KernelParams& params, double a);

struct NormEntry {
  std::string quantity;
  double measured;
  double predicted_exponent;
};

std::vector<NormEntry> verify_norm_bounds(const KernelSet& k);

// Largest |gamma_inf - 1| - |sigma_inf| over shells (must be <= 0).
double gamma_sigma_bound_excess(const KernelSet& k);

struct IdentityResiduals {
  double hyperbolic_infty;  // max |gamma_inf^2 - sigma_inf^2 - 1|
  double hyperbolic_cut;    // max |gamma^2 - sigma^2 - 1|
  double product;           // max |gamma_inf sigma_inf sqrt(1 - 4 eta_inf) - eta_inf|
  double square;            // max |2 sigma_inf^2 sqrt(1-4eta) - (1 - 2 eta - sqrt(1-4eta))|, scaled
  double tanh;              // max |tanh(2 mu_inf) - (-N^k Vf)/(p^2 + N^k Vf)|
};

IdentityResiduals kernel_identities(const KernelSet& k);

// ---- position space on an M^3 grid of the unit torus -----------------------

enum class PositionWhich { sigma, gamma_minus_1, eta };

struct PositionKernel {
  int M = 0;
  std::vector<double> values;  // index (i M + j) M + k  <->  x = (i, j, k) / M
  double imag_residue = 0.0;
  double dropped_l1 = 0.0;     // l1 mass of the kernel outside the mode cube

  double at(int i, int j, int k) const {
    return values[(static_cast<std::size_t>(i) * M + j) * M + k];
  }
  // minimum-image distance of grid point (i, j, k) from the origin
  double radius(int i, int j, int k) const;
};

// Fourier series over the modes |k_i| <= M/2 - 1 by one FFT.
PositionKernel position_transform(const KernelSet& k, PositionWhich which, int M);
// Same with explicit per-shell coefficients (values indexed by shell n).
PositionKernel position_transform(std::span<const double> per_shell, int M);

struct DecayMeasure {
  double sup_constant = 0.0;  // sup |k(x)| (|x|/ell)^m / N over |x| >= 4 ell
  double argmax_radius = 0.0;
  bool region_empty = false;
};

// On the FFT grid. Cube truncation rings for kernels with slow momentum
// tails (sigma, eta), so use torus_decay for those.
DecayMeasure verify_decay(const PositionKernel& pk, double ell, int m, double N);

// int_{|x| >= r} |grad sigma^check|^2 dx from the FFT of i p sigma_p.
double gradient_tail(const KernelSet& k, double r, int M);

}  // namespace lhy
