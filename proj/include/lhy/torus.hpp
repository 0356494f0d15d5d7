#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "lhy/kernels.hpp"
#include "lhy/radial_transform.hpp"

namespace lhy {

using Vec3 = std::array<double, 3>;

inline double norm(const Vec3& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

// Radial continuum kernel k(r) = coulomb * (-N w(L r)) + table(r) + compact(r),
// negligible beyond r_cut.
struct RadialProfile {
  double coulomb = 0.0;
  RadialTable table;
  std::function<double(double)> compact;
  double r_cut = 0.0;

  const KernelModel* model = nullptr;
  double operator()(double r) const;
};

// Periodic kernel on the unit torus:
//   value(x) = sum_n k(|x + n|) + sum_waves c cos(k . x) + constant.
// The 27 nearest images are summed directly; the smooth contribution of the
// remaining ones is tabulated on a grid over the unit cell.
class TorusKernel {
 public:
  TorusKernel() = default;
  TorusKernel(RadialProfile profile, std::vector<std::array<double, 4>> waves, double constant, int far_grid = 17);

  double operator()(const Vec3& x) const;
  const RadialProfile& profile() const { return profile_; }
  std::size_t image_count() const { return images_.size(); }

 private:
  double far_field(const Vec3& y) const;

  RadialProfile profile_;
  std::vector<Vec3> images_;
  int grid_ = 0;
  std::vector<double> far_;
  std::vector<std::array<double, 4>> waves_;  // (kx, ky, kz, coefficient)
  double constant_ = 0.0;
};

struct TorusOptions {
  double q_max_over_L = 128.0;
  double dq = pi / 16.0;
  double r_table = 7.5;
  double tail_tolerance = 1e-12;  // relative to |k(0)|, sets r_cut
  double ewald_beta = 2.0 * pi;
  int far_grid = 17;
};

// Momentum kernel F(q) as a torus kernel. When `coulomb` is set the profile
// carries -N w(L r) and the table holds F - eta_infty.
TorusKernel make_torus_kernel(const KernelModel& m, const std::function<double(double)>& F, bool coulomb,
                              const TorusOptions& opt = {});

// Named kernels used by the identities and energy modules.
struct TorusKernels {
  std::shared_ptr<const KernelModel> model;
  TorusOptions options;
  TorusKernel sigma, eta, eta_infty, sigma2, sigma_eta, eta2, w_eta, w_sigma;
  double ewald_K0 = 0.0;  // hat s(0) of the short-range Ewald part

  // L^3 V(L|x|) and L^3 (2 V w + V f)(L|x|); compact inside R / L
  double v_check(double r) const;
  double w_check(double r) const;

  static TorusKernels build(std::shared_ptr<const KernelModel> m, const TorusOptions& opt = {});
};

// eta_infty on the torus with a Gaussian split at width beta: short range
// -N w - f_G summed over images, long range as a cosine series, and the
// k = 0 correction; -K0 is returned through `K0`.
TorusKernel make_eta_infty_ewald(const KernelModel& m, const TorusOptions& opt, double& K0,
                                 RadialTable* f_G_out = nullptr);

// sup |k(x)| (|x|/ell)^m / N over the points x = (i, j, k)/M of the unit cell
// with minimum-image |x| >= 4 ell. The cubic symmetry of radial kernels is
// used to sample one octant only.
DecayMeasure torus_decay(const TorusKernel& k, double ell, int m, double N, int M = 64);

// ---- quadrature rules -----------------------------------------------------

struct Node {
  Vec3 x;
  double w;
};

// Product rule on the ball |x - c| <= rho: radial Gauss-Legendre panels on
// the given breakpoints, Gauss in cos(theta), trapezoid in phi. The node set
// is symmetric under x - c -> c - x. Nodes outside the unit cell centred at
// c are dropped when clip_to_cell is set.
std::vector<Node> ball_rule(const Vec3& c, std::span<const double> breaks, int per_panel, int n_theta, int n_phi,
                            bool clip_to_cell);

// Breakpoints 0, r0, 2 r0, 4 r0, ... up to rho (geometric grading).
std::vector<double> graded_breaks(double r0, double rho);

// Six directions +-e_i, for nearly radial integrands.
std::vector<Node> octahedral_ball_rule(double rho, int n_radial);

}  // namespace lhy
