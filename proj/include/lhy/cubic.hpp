#pragma once

#include <array>

#include "lhy/kernels.hpp"
#include "lhy/torus.hpp"

namespace lhy {

struct CubicOptions {
  int outer_radial = 12;      // radial Gauss nodes on the support ball of V
  int inner_per_panel = 8;
  int inner_theta = 12;       // must be even
  int inner_phi = 16;         // must be even
  double inner_scale = 40.0;  // inner ball radius in units of ell_eta
};

// Lattice double sums of the cubic expansion, reduced to radial lattice sums
// and position integrals over the support ball of L^3 V(L x).
struct CubicTerms {
  // N^{k-1} sum_{p,q} V^(p/L) (eta_inf(p) + eta_inf(p+q)) sigma(q)^2
  double main_factorized = 0.0;   // N^{k-1} (sum V^ eta_inf)(sum sigma^2)
  double main_convolution = 0.0;  // N^{k-1} int V eta_inf (sigma^2)
  double main = 0.0;

  // N^{k-1} sum_{p,q} W^(p/L) sigma_q (six eta-sigma pairings), W = 2 Vw + Vf
  std::array<double, 6> kc_parts{};
  double kc = 0.0;

  // (N^{k-2}/2) sum_{p,q,r} V^(r/L) T(p,q) T(p-r,q) with the same pairings T
  double vn = 0.0;
  double vn_swapped = 0.0;  // same with the two factors exchanged (x -> -x)

  double residual() const { return kc + vn - main; }
};

CubicTerms cubic_terms(const KernelSet& k, const TorusKernels& t, const CubicOptions& opt = {});

}  // namespace lhy
