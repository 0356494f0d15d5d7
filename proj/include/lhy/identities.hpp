#pragma once

#include <vector>

#include "lhy/fit.hpp"
#include "lhy/torus.hpp"

namespace lhy {

struct ResidualSeries {
  std::vector<double> N;
  std::vector<double> residual;
  PowerFit fit;
};

ResidualSeries make_series(std::vector<double> N, std::vector<double> residual);

struct MomentumSample {
  int k[3];  // p = 2 pi k
  double p() const;
};

// Orbit representatives k1 >= k2 >= k3 >= 0 (k != 0) of every shell up to
// n_dense, then two representatives on geometrically spaced shells up to
// (p_max / 2 pi)^2.
std::vector<MomentumSample> residual_samples(std::int64_t n_dense, double p_max);

// Lattice convolution sum_q V^((p - q)/L) eta_infty(q) by a Gaussian split:
// the smooth part of eta_infty is summed in momentum space, the rest is
// integrated against L^3 V(L x) in position space.
class EwaldConvolution {
 public:
  EwaldConvolution(std::shared_ptr<const KernelModel> m, double beta = 2.0 * pi);

  double operator()(const MomentumSample& p) const;
  double beta() const { return beta_; }

 private:
  std::shared_ptr<const KernelModel> model_;
  double beta_;
  double K0_ = 0.0;
  RadialTable f_G_;
  std::vector<std::array<double, 4>> waves_;  // (kx, ky, kz, eta_infty e^{-k^2/2beta^2})
};

struct ScatteringResidual {
  double sup = 0.0;             // sup_p |p^2 eta + N^k/2 V^ + N^k/(2N) sum V^ eta|
  double convolution_sup = 0.0; // sup_p |N^k/(2N) sum V^ eta + N^k/2 (Vw)^|
  double consistency = 0.0;     // max |R - X - (p^2 eta_inf + N^k/2 (Vf)^)|
  std::int64_t argmax_shell = 0;
  std::size_t samples = 0;
};

ScatteringResidual scattering_residual(const KernelSet& k, double beta = 2.0 * pi, std::int64_t n_dense = 300);

struct SumRule {
  double sum = 0.0;         // sum_{p != 0} N^k V^(p/L) eta_inf(p)
  double target = 0.0;      // (8 pi a - V^(0)) N^{1+k}
  double residual = 0.0;    // sum - target
  double ewald_sum = 0.0;   // same sum as N^k times the convolution at p = 0
};

SumRule sum_rule(const KernelSet& k);

}  // namespace lhy
