#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lhy/common.hpp"

namespace lhy {

struct SquareBarrier {
  double V0;
  double R;
};

// V0 * exp(-r^2 / (2 width^2)) for r <= R.
struct GaussianTruncated {
  double V0;
  double width;
  double R;
};

// Linear interpolation between samples, zero beyond the last radius.
struct Tabulated {
  std::vector<double> r;
  std::vector<double> V;
};

class RadialPotential {
 public:
  using Kind = std::variant<SquareBarrier, GaussianTruncated, Tabulated>;

  explicit RadialPotential(Kind kind);

  static RadialPotential square_barrier(double V0, Length R);
  static RadialPotential gaussian_truncated(double V0, Length width, Length R);
  static RadialPotential tabulated(std::vector<double> r, std::vector<double> V);
  static RadialPotential zero();

  // "square_barrier:V0,R", "gaussian:V0,width,R", "zero".
  static RadialPotential parse(std::string_view spec);

  double operator()(double r) const;
  double support_radius() const { return support_; }
  bool is_zero() const { return zero_; }
  const Kind& kind() const { return kind_; }
  std::string describe() const;

 private:
  Kind kind_;
  double support_ = 0.0;
  bool zero_ = false;
};

struct GridSpec {
  int intervals = 16384;  // uniform intervals on [0, R]
  double extent_factor = 2.0;
};

struct ScatteringSolution {
  // Uniform grid on [0, extent] with a node at the support radius.
  std::vector<double> r;
  std::vector<double> f;
  std::vector<double> w;
  std::vector<double> fprime;
  double a = 0.0;
  double support_radius = 0.0;
  double step = 0.0;
  std::string method = "rk4";
  double step_doubling_delta = 0.0;  // |a(h) - a(2h)|

  double f_at(double r) const;
  double w_at(double r) const;
  // Largest |f - (1 - a/r)| over exterior grid nodes.
  double exterior_defect() const;
};

ScatteringSolution solve_zero_energy(const RadialPotential& V, const GridSpec& grid = {});

struct ScatteringCheck {
  double residual;          // |8 pi a - 4 pi int r^2 V f| / (8 pi a)
  double eight_pi_a;
  double vf_integral;
  double v_hat_zero;
  bool strict_inequality;   // 8 pi a < V^(0); true when V == 0 (skipped)
};

ScatteringCheck check_scattering_length(const ScatteringSolution& sol, const RadialPotential& V,
                                        double tol = 1e-6);

// 4 pi int_0^R r^2 g(r) sinc(xi r) dr by composite Simpson on uniform samples
// g[0..n] over [0, R] (n even).
double radial_fourier(std::span<const double> g, double R, Wavenumber xi);

enum class RadialFunction { V, Vf, Vw };
std::string_view to_string(RadialFunction id);

// Radial transform of V, Vf or Vw tabulated on a uniform xi grid, evaluated
// by 8-point Lagrange interpolation (the transform is band limited by R) and
// by a three-term endpoint expansion beyond the table.
class RadialFourierTable {
 public:
  RadialFourierTable() = default;
  RadialFourierTable(RadialFunction id, std::span<const double> g, double R, double dxi,
                     double xi_max);

  double operator()(double xi) const;
  RadialFunction id() const { return id_; }
  double value_at_zero() const { return value_at_zero_; }
  double dxi() const { return dxi_; }
  double xi_max() const { return xi_max_; }
  std::span<const double> values() const { return values_; }

 private:
  RadialFunction id_ = RadialFunction::V;
  double dxi_ = 0.0;
  double xi_max_ = 0.0;
  double R_ = 0.0;
  double value_at_zero_ = 0.0;
  std::vector<double> values_;
  // phi = r g(r); endpoint data at R from the inside
  double phi_R_ = 0.0, dphi_R_ = 0.0, d2phi_R_ = 0.0;
};

struct FourierTables {
  RadialFourierTable V, Vf, Vw;
  double a = 0.0;
  double R = 0.0;

  static FourierTables build(const RadialPotential& pot, const ScatteringSolution& sol,
                             double dxi = 0.05, double xi_max = 200.0);
};

// Everything downstream needs from the potential module.
struct Scattering {
  RadialPotential potential;
  ScatteringSolution solution;
  FourierTables tables;

  static Scattering solve(const RadialPotential& pot, const GridSpec& grid = {});
  double a() const { return solution.a; }
  // Profiles at radius rho in potential units.
  double w(double rho) const { return solution.w_at(rho); }
  double V(double rho) const { return potential(rho); }
  double f(double rho) const { return solution.f_at(rho); }
};

}  // namespace lhy
