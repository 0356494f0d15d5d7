#pragma once

#include <functional>
#include <vector>

#include "lhy/interp.hpp"

namespace lhy {

// Inverse 3D transform of a radial momentum function F:
//   f(r) = (1/2pi^2) int_0^inf h(q) sinc(q r) dq,   h(q) = q^2 F(q),
// by the trapezoid rule on q_j = j dq (one DST-I). h must be even and
// smooth in q and negligible beyond q_max; the rule is then spectrally
// accurate for r well inside the alias period 2 pi / dq.
class RadialTable {
 public:
  RadialTable() = default;
  static RadialTable from_momentum(const std::function<double(double)>& h, double q_max, double dq,
                                   double r_max);

  double operator()(double r) const { return r > r_max_ ? 0.0 : f_(r); }
  double r_max() const { return r_max_; }
  double dr() const { return f_.step(); }
  std::span<const double> samples() const { return f_.samples(); }
  bool empty() const { return f_.empty(); }

 private:
  UniformSampled<8> f_;
  double r_max_ = 0.0;
};

}  // namespace lhy
