#pragma once

#include <functional>
#include <string>
#include <vector>

#include "regulab/approximate_units.hpp"

namespace regulab {

/// Uniform line grid x_i = lo + i * step, i = 0..n-1.
struct LineGrid {
  double lo = 0.0;
  double step = 1.0;
  int n = 0;

  double at(int i) const { return lo + i * step; }
  double hi() const { return at(n - 1); }
};

/// Symmetric grid with 2*half+1 points and the given step.
LineGrid centered_grid(double step, int half);

enum class MollifierKind { PlateauInverse, GaussHermite, DiscreteDelta };
const char* to_string(MollifierKind k);

/// Tensor-product mollifier rho(x) = prod_i rho1(x_i), sampled on a centered grid per axis.
/// Scaling: rho_eps(x) = eps^{-sum e_i} rho(x_1/eps^{e_1}, ..., x_d/eps^{e_d}); the axis grids scale with it.
struct Mollifier {
  MollifierKind kind = MollifierKind::GaussHermite;
  int d = 1;
  std::vector<LineGrid> grids;
  int moment_order = 0;   // moments of multi-order 1..M vanish
  double eps = 1.0;
  std::vector<int> exponents;
  PlateauFunction plateau{};  // PlateauInverse only
  int hermite_order = 0;      // GaussHermite only
  std::string tag;

  /// Unscaled one-dimensional factor.
  double profile(double s) const;
  /// Scaled factor on `axis`.
  double axis_value(int axis, double x) const;
  std::vector<double> axis_samples(int axis) const;
  /// Full tensor grid, row-major, axis 0 slowest. Only for small grids.
  std::vector<double> samples() const;
  double axis_scale(int axis) const;

  /// Trapezoid quadrature of x^alpha rho_eps on the grid (factorizes exactly over axes).
  double moment(const std::vector<int>& alpha) const;
  double mass() const;
  /// Largest sampled |rho_eps| on the outer half of the grid, relative to the peak.
  double tail_ratio() const;
};

/// rho1(x) = (1/pi) int_0^b F(w) cos(w x) dw; requires step <= pi/(4b). check_order moments are verified.
Mollifier build_mollifier(const PlateauFunction& F, int d, double step, int half, int check_order = 4);
/// Gauss-Hermite kernel with moments 1..M vanishing (M even: 0, 2, 4, 6).
Mollifier gauss_hermite_mollifier(int M, int d, double step, int half);
/// Kronecker delta on the grid, divided by step^d.
Mollifier discrete_delta(int d, double step, int half);

Mollifier scale_mollifier(const Mollifier& m, double eps, const std::vector<int>& exponents);

/// Width (standard deviation) of |rho_eps| along `axis`, by quadrature.
double axis_width(const Mollifier& m, int axis);

/// Sampled function on a uniform d-dimensional grid (same LineGrid per axis), row-major.
struct SampledField {
  int d = 1;
  LineGrid grid;
  std::vector<double> v;

  double& at(const std::vector<int>& idx);
  double at(const std::vector<int>& idx) const;
};

SampledField sample_field(int d, const LineGrid& grid, const std::function<double(const std::vector<double>&)>& f);

struct ConvolutionResult {
  SampledField out;
  int kernel_half = 0;   // kernel stencil radius used, in grid steps
  bool resolved = true;  // false once rho_eps is narrower than about two grid steps
};

/// Discrete convolution (rho_eps * u)(x_i) = sum_j rho_eps(x_j) u(x_i - x_j) h^d, with u = 0 off-grid.
ConvolutionResult euclid_convolve(const Mollifier& m_eps, const SampledField& u);

}  // namespace regulab
