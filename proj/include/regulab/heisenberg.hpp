#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "regulab/euclid.hpp"
#include "regulab/net_asymptotics.hpp"

namespace regulab {

/// Point (x, xi, t) of the Heisenberg group H_N; the scalar type is a template so
/// the group law can also be evaluated in exact rational arithmetic.
template <class T, int N = 1>
struct HeisPoint {
  std::array<T, N> x{};
  std::array<T, N> xi{};
  T t{};

  bool operator==(const HeisPoint&) const = default;
};

template <class T, int N>
T symplectic(const HeisPoint<T, N>& p, const HeisPoint<T, N>& q) {
  T s{};
  for (int i = 0; i < N; ++i) s += p.x[i] * q.xi[i] - q.x[i] * p.xi[i];
  return s;
}

/// (x,xi,t)(y,eta,s) = (x+y, xi+eta, t+s+(x.eta - y.xi)/2)
template <class T, int N>
HeisPoint<T, N> heis_compose(const HeisPoint<T, N>& p, const HeisPoint<T, N>& q) {
  HeisPoint<T, N> r;
  for (int i = 0; i < N; ++i) {
    r.x[i] = p.x[i] + q.x[i];
    r.xi[i] = p.xi[i] + q.xi[i];
  }
  r.t = p.t + q.t + symplectic(p, q) / T(2);
  return r;
}

template <class T, int N>
HeisPoint<T, N> heis_inverse(const HeisPoint<T, N>& p) {
  HeisPoint<T, N> r;
  for (int i = 0; i < N; ++i) {
    r.x[i] = -p.x[i];
    r.xi[i] = -p.xi[i];
  }
  r.t = -p.t;
  return r;
}

/// Coordinatewise dilation eps * p (the Euclidean scalar multiple).
template <class T, int N>
HeisPoint<T, N> heis_scale(const T& eps, const HeisPoint<T, N>& p) {
  HeisPoint<T, N> r;
  for (int i = 0; i < N; ++i) {
    r.x[i] = eps * p.x[i];
    r.xi[i] = eps * p.xi[i];
  }
  r.t = eps * p.t;
  return r;
}

template <class T, int N>
HeisPoint<T, N> heis_difference(const HeisPoint<T, N>& p, const HeisPoint<T, N>& q) {
  HeisPoint<T, N> r;
  for (int i = 0; i < N; ++i) {
    r.x[i] = p.x[i] - q.x[i];
    r.xi[i] = p.xi[i] - q.xi[i];
  }
  r.t = p.t - q.t;
  return r;
}

/// p - (eps q^{-1}) p, evaluated from the group law.
template <class T, int N>
HeisPoint<T, N> heis_dist(const HeisPoint<T, N>& p, const HeisPoint<T, N>& q, const T& eps) {
  return heis_difference(p, heis_compose(heis_scale(eps, heis_inverse(q)), p));
}

/// The simplified closed form -eps q + (eps/2) omega(p,q) e_t, kept for comparison.
template <class T, int N>
HeisPoint<T, N> heis_dist_displayed(const HeisPoint<T, N>& p, const HeisPoint<T, N>& q, const T& eps) {
  HeisPoint<T, N> r = heis_scale(T(-eps), q);
  r.t += eps * symplectic(p, q) / T(2);
  return r;
}

using HPoint = HeisPoint<double, 1>;

enum class SignRelation { Equal, Negated, Other };
const char* to_string(SignRelation s);

struct DistComparison {
  HPoint direct;
  HPoint displayed;
  SignRelation relation = SignRelation::Other;
};

/// Compares the group-law evaluation with the simplified display; tol is absolute.
DistComparison compare_dist(const HPoint& p, const HPoint& q, double eps, double tol = 1e-12);

// ---- group convolution on H_1 ----

struct HeisConvolveResult {
  std::vector<cplx> values;      // at the requested points
  std::vector<cplx> coarse;      // same quadrature with every other node
  double floor_estimate = 0.0;   // max |values - coarse|
  bool resolved = true;          // false when rho_eps is narrower than two nodes on some axis
};

/// (rho_eps *_H f)(p) = int rho_eps(q) f(p q^{-1}) dq over the tensor grid of m_eps.
HeisConvolveResult heis_convolve(const Mollifier& m_eps, const std::function<cplx(const HPoint&)>& f,
                                 const std::vector<HPoint>& points);

/// Trapezoid integral of h over the cube grid^3, optionally after left or right translation by q.
enum class Translation { None, Left, Right };
cplx heis_integrate(const std::function<cplx(const HPoint&)>& h, const LineGrid& grid, const HPoint& q = {},
                    Translation side = Translation::None);

struct HeisConvergence {
  EpsilonGrid grid;
  ScalarNet error;        // max_p |rho_eps *_H f - f|
  ScalarNet floor;        // coarse-vs-fine quadrature difference
  OrderEstimate fit;      // over eps with error above 10x floor
  int usable = 0;         // number of eps points above the floor
  double smallest_usable_eps = 0.0;
};

/// Convergence net of heis_convolve toward f on the given points; m is unscaled.
HeisConvergence heis_convergence(const Mollifier& m, const EpsilonGrid& grid,
                                 const std::function<cplx(const HPoint&)>& f, const std::vector<HPoint>& points);

// ---- line-grid functions, STFT and the Schrodinger representation ----

struct Sampled1D {
  LineGrid grid;
  Eigen::VectorXcd v;
};

Sampled1D sample_line(const LineGrid& grid, const std::function<cplx(double)>& f);
double l2_norm(const Sampled1D& f);

/// 2^{1/4} exp(-pi t^2), unit L2 norm.
double unit_gaussian(double t);
/// exp(-1/(1-t^2)) on (-1,1).
double smooth_bump(double t);

/// V_g f(x,xi) = int f(t) conj(g(t-x)) e^{-2 pi i xi t} dt. Row = x index, column = xi index.
struct StftSamples {
  LineGrid x, xi;
  Eigen::MatrixXcd V;
};

/// f and g share one centered t-grid; x-step must be an integer multiple of the t-step.
StftSamples stft(const Sampled1D& g, const Sampled1D& f, const LineGrid& x, const LineGrid& xi);
/// f(t) = int V(x,xi) e^{2 pi i xi t} g(t-x) dx dxi on g's grid.
Sampled1D stft_invert(const Sampled1D& g, const StftSamples& V);

struct WindowedTransformConfig {
  Sampled1D g;
  Sampled1D phi;  // tau profile
  LineGrid x, xi;

  /// Throws unless ||g||_2 = 1 and int phi = 1 within 1e-8 and the grids are compatible.
  void validate() const;
};

/// Gaussian window on [-T,T] with step dt; phi = exp(-pi tau^2); x symmetric;
/// xi covers one period [-1/(2dt), 1/(2dt)) of the sampled transform.
WindowedTransformConfig default_transform_config(double T = 5.0, double dt = 1.0 / 32, double X = 5.0,
                                                 double dx = 1.0 / 8, double dxi = 1.0 / 16,
                                                 double tau_max = 4.0, double dtau = 1.0 / 8);

/// Samples F(x_a, xi_b, tau_c), tau fastest.
struct HeisSampled3D {
  LineGrid x, xi, tau;
  std::vector<cplx> data;

  cplx& at(int a, int b, int c) { return data[(static_cast<std::size_t>(a) * xi.n + b) * tau.n + c]; }
  cplx at(int a, int b, int c) const { return data[(static_cast<std::size_t>(a) * xi.n + b) * tau.n + c]; }
};

HeisSampled3D sample_heis(const LineGrid& x, const LineGrid& xi, const LineGrid& tau,
                          const std::function<cplx(const HPoint&)>& F);

/// pi(x,xi,tau) h = e^{2 pi i tau} e^{pi i x xi} T_x M_xi h;
/// pihat(F) h(t) = int F(a) pi(a^{-1}) h(t) da on h's grid.
Sampled1D schrodinger_apply(const HeisSampled3D& F, const Sampled1D& h);
/// ker pihat(F)(t,y) = int int F(y-t, xi, tau) e^{-2 pi i tau} e^{-2 pi i xi (y+t)/2} dxi dtau
/// on t_i, y_j from `t` (step equal to F's x-step).
Eigen::MatrixXcd schrodinger_kernel(const HeisSampled3D& F, const LineGrid& t);

/// F(x,xi,tau) = e^{2 pi i tau} phi(tau) e^{pi i x xi} V_g f(-x,-xi), so that pihat(F) g = f.
HeisSampled3D cheap_factorize(const Sampled1D& f, const WindowedTransformConfig& cfg);

struct SchrodingerUnitReport {
  EpsilonGrid grid;
  std::vector<std::string> names;
  std::vector<ScalarNet> errors;       // sup |pihat(rho_eps) f - f| over the window
  std::vector<OrderEstimate> fits;     // tail half of the eps above the floor (needs 6 such points)
  std::vector<int> usable;
  ScalarNet l1_norm;                   // int |rho_eps|
  ScalarNet kernel_norm;               // operator norm of the sampled kernel
  double floor_eps = 0.0;              // smallest eps at which rho_eps is resolved by t
};

/// Kernel of pihat(rho_eps) for a tensor mollifier on R^3 (axes x, xi, tau).
Eigen::MatrixXcd schrodinger_unit_kernel(const Mollifier& m_eps, const LineGrid& t);

SchrodingerUnitReport schrodinger_unit(const Mollifier& m, const EpsilonGrid& grid, const LineGrid& t,
                                       const std::vector<std::pair<std::string, Sampled1D>>& suite,
                                       double window = 1.5);

}  // namespace regulab
