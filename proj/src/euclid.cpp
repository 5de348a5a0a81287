#include "regulab/euclid.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "regulab/error.hpp"

namespace regulab {

namespace {

constexpr double kPi = std::numbers::pi;

using quad = __float128;

quad transition_q(quad t) {
  if (t <= 0) return 1;
  if (t >= 1) return 0;
  const quad h1 = expq(-1 / (1 - t));
  const quad h0 = expq(-1 / t);
  return h1 / (h1 + h0);
}

quad plateau_q(const PlateauFunction& F, quad w) {
  if (w < 0) w = -w;
  if (w <= F.a) return 1;
  if (F.strict) return expq(-w * w * expq(-1 / (w - F.a)));
  return transition_q((w - F.a) / (F.b - F.a));
}

/// Frequency cutoff beyond which the plateau is zero (or below quad precision).
double plateau_support(const PlateauFunction& F) { return F.strict ? std::max(F.b, 12.0) : F.b; }

/// Quad-precision plateau values at w_k = k B / N, cached per (plateau, N).
const std::vector<quad>& plateau_nodes(const PlateauFunction& F, int N) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, bool, int>, std::vector<quad>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& v = cache[{F.a, F.b, F.strict, N}];
  if (v.empty()) {
    const quad dw = quad(plateau_support(F)) / N;
    v.resize(N + 1);
    for (int k = 0; k <= N; ++k) v[k] = plateau_q(F, dw * k);
  }
  return v;
}

/// rho1(x) = (1/pi) int_0^B F(w) cos(w x) dw by the trapezoid rule in quad precision.
/// The trapezoid sum equals the periodization of rho1 with period 2 pi / dw, so dw is chosen
/// to keep the images at least 1000 away from x.
double plateau_inverse(const PlateauFunction& F, double x) {
  const double B = plateau_support(F);
  int N = 256;
  while (N < B * (std::abs(x) + 1000.0) / (2 * kPi)) N *= 2;
  const std::vector<quad>& f = plateau_nodes(F, N);
  const quad dw = quad(B) / N;
  const quad c = cosq(dw * x), s = sinq(dw * x);
  quad cr = 1, ci = 0, sum = 0;
  for (int k = 0; k <= N; ++k) {
    const quad term = f[k] * cr;
    sum += (k == 0 || k == N) ? term / 2 : term;
    if (k % 64 == 63) {
      // reseed to keep the rotation recurrence at quad accuracy
      const quad ang = dw * (k + 1) * x;
      cr = cosq(ang);
      ci = sinq(ang);
    } else {
      const quad nr = cr * c - ci * s;
      ci = cr * s + ci * c;
      cr = nr;
    }
  }
  return static_cast<double>(sum * dw / acosq(quad(-1)));
}

/// sum_{j <= M/2} (-1)^j He_{2j}(x) / (2^j j!) times the standard normal density.
double gauss_hermite(int M, double x) {
  double he_prev = 1.0, he = x;  // He_0, He_1
  double acc = 1.0, coeff = 1.0;
  for (int k = 2; k <= M; ++k) {
    const double next = x * he - (k - 1) * he_prev;
    he_prev = he;
    he = next;
    if (k % 2 == 0) {
      const int j = k / 2;
      coeff *= -0.5 / j;
      acc += coeff * he;
    }
  }
  return acc * std::exp(-0.5 * x * x) / std::sqrt(2 * kPi);
}

}  // namespace

LineGrid centered_grid(double step, int half) {
  if (!(step > 0.0) || half < 1) fail(Errc::parameter_out_of_range, "grid needs step > 0 and half >= 1");
  return {-half * step, step, 2 * half + 1};
}

const char* to_string(MollifierKind k) {
  switch (k) {
    case MollifierKind::PlateauInverse: return "inverse-transform-of-plateau";
    case MollifierKind::GaussHermite: return "gauss-hermite";
    case MollifierKind::DiscreteDelta: return "discrete-delta";
  }
  return "unknown";
}

double Mollifier::profile(double s) const {
  switch (kind) {
    case MollifierKind::PlateauInverse: return plateau_inverse(plateau, s);
    case MollifierKind::GaussHermite: return gauss_hermite(hermite_order, s);
    case MollifierKind::DiscreteDelta: {
      // grids[0] carries the unscaled step
      const double h = grids[0].step / axis_scale(0);
      return std::abs(s) < 0.5 * h ? 1.0 / h : 0.0;
    }
  }
  return 0.0;
}

double Mollifier::axis_scale(int axis) const {
  const int e = exponents.empty() ? 1 : exponents[axis];
  return std::pow(eps, e);
}

double Mollifier::axis_value(int axis, double x) const {
  const double s = axis_scale(axis);
  return profile(x / s) / s;
}

std::vector<double> Mollifier::axis_samples(int axis) const {
  const LineGrid& g = grids[axis];
  std::vector<double> v(g.n);
#pragma omp parallel for schedule(dynamic, 64) if (kind == MollifierKind::PlateauInverse)
  for (int i = 0; i < g.n; ++i) v[i] = axis_value(axis, g.at(i));
  return v;
}

std::vector<double> Mollifier::samples() const {
  std::vector<std::vector<double>> ax;
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) {
    ax.push_back(axis_samples(a));
    total *= ax.back().size();
  }
  std::vector<double> out(total, 1.0);
  std::size_t stride = total;
  for (int a = 0; a < d; ++a) {
    const std::size_t n = ax[a].size();
    stride /= n;
    for (std::size_t i = 0; i < total; ++i) out[i] *= ax[a][(i / stride) % n];
  }
  return out;
}

namespace {

double axis_moment(const LineGrid& g, const std::vector<double>& v, int k) {
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) s += std::pow(g.at(i), k) * v[i];
  return s * g.step;
}

}  // namespace

double Mollifier::moment(const std::vector<int>& alpha) const {
  if (static_cast<int>(alpha.size()) != d) fail(Errc::dimension_mismatch, "moment multi-index has wrong length");
  double prod = 1.0;
  for (int a = 0; a < d; ++a) prod *= axis_moment(grids[a], axis_samples(a), alpha[a]);
  return prod;
}

double Mollifier::mass() const { return moment(std::vector<int>(d, 0)); }

double Mollifier::tail_ratio() const {
  double worst = 0.0;
  for (int a = 0; a < d; ++a) {
    const LineGrid& g = grids[a];
    const std::vector<double> v = axis_samples(a);
    double peak = 0.0, tail = 0.0;
    const double R = g.hi();
    for (int i = 0; i < g.n; ++i) {
      peak = std::max(peak, std::abs(v[i]));
      if (std::abs(g.at(i)) > 0.5 * R) tail = std::max(tail, std::abs(v[i]));
    }
    if (peak > 0.0) worst = std::max(worst, tail / peak);
  }
  return worst;
}

namespace {

Mollifier base_mollifier(MollifierKind kind, int d, double step, int half) {
  if (d < 1 || d > 3) fail(Errc::parameter_out_of_range, "mollifier dimension must be 1, 2 or 3");
  Mollifier m;
  m.kind = kind;
  m.d = d;
  m.grids.assign(d, centered_grid(step, half));
  m.exponents.assign(d, 1);
  return m;
}

void check_moments(const Mollifier& m, int order) {
  // the quadrature factorizes over axes, so per-axis moment tables give every multi-index
  std::vector<std::vector<double>> table(m.d);
  for (int a = 0; a < m.d; ++a) {
    const std::vector<double> v = m.axis_samples(a);
    for (int k = 0; k <= order; ++k) table[a].push_back(axis_moment(m.grids[a], v, k));
  }
  std::vector<int> alpha(m.d, 0);
  for (;;) {
    int tot = 0;
    double mom = 1.0;
    for (int a = 0; a < m.d; ++a) {
      tot += alpha[a];
      mom *= table[a][alpha[a]];
    }
    if (tot == 0 && std::abs(mom - 1.0) > 1e-8)
      fail(Errc::support_overflow, "mollifier mass misses 1 by more than 1e-8; widen the grid");
    if (tot > 0 && tot <= order && std::abs(mom) > 1e-6)
      fail(Errc::support_overflow, "mollifier moment of order " + std::to_string(tot) + " exceeds 1e-6");
    int a = 0;
    while (a < m.d && ++alpha[a] > order) alpha[a++] = 0;
    if (a == m.d) break;
  }
}

}  // namespace

Mollifier build_mollifier(const PlateauFunction& F, int d, double step, int half, int check_order) {
  if (step > kPi / (4 * plateau_support(F)))
    fail(Errc::under_resolved_grid, "mollifier grid step must be at most pi/(4b)");
  Mollifier m = base_mollifier(MollifierKind::PlateauInverse, d, step, half);
  m.plateau = F;
  m.moment_order = check_order;
  m.tag = "inverse-transform-of-plateau";
  check_moments(m, check_order);
  return m;
}

Mollifier gauss_hermite_mollifier(int M, int d, double step, int half) {
  if (M < 0 || M % 2 != 0 || M > 10) fail(Errc::parameter_out_of_range, "Gauss-Hermite order must be even in [0,10]");
  Mollifier m = base_mollifier(MollifierKind::GaussHermite, d, step, half);
  m.hermite_order = M;
  m.moment_order = M + 1;  // odd moments vanish by symmetry
  m.tag = "gauss-hermite-" + std::to_string(M);
  check_moments(m, m.moment_order);
  return m;
}

Mollifier discrete_delta(int d, double step, int half) {
  Mollifier m = base_mollifier(MollifierKind::DiscreteDelta, d, step, half);
  m.moment_order = 0;
  m.tag = "discrete-delta";
  return m;
}

Mollifier scale_mollifier(const Mollifier& m, double eps, const std::vector<int>& exponents) {
  if (!(eps > 0.0 && eps <= 1.0)) fail(Errc::eps0_out_of_range, "eps must lie in (0,1]");
  if (static_cast<int>(exponents.size()) != m.d) fail(Errc::dimension_mismatch, "one exponent per axis");
  for (int e : exponents)
    if (e < 1) fail(Errc::parameter_out_of_range, "scaling exponents must be >= 1");
  Mollifier out = m;
  // undo any previous scaling of the grids, then apply the new one
  for (int a = 0; a < m.d; ++a) {
    const double f = std::pow(eps, exponents[a]) / m.axis_scale(a);
    out.grids[a].lo *= f;
    out.grids[a].step *= f;
  }
  out.eps = eps;
  out.exponents = exponents;
  return out;
}

double axis_width(const Mollifier& m, int axis) {
  const LineGrid& g = m.grids[axis];
  const std::vector<double> v = m.axis_samples(axis);
  double s0 = 0.0, s2 = 0.0;
  for (int i = 0; i < g.n; ++i) {
    s0 += std::abs(v[i]);
    s2 += g.at(i) * g.at(i) * std::abs(v[i]);
  }
  return std::sqrt(s2 / s0);
}

double& SampledField::at(const std::vector<int>& idx) {
  std::size_t k = 0;
  for (int a = 0; a < d; ++a) k = k * grid.n + idx[a];
  return v[k];
}

double SampledField::at(const std::vector<int>& idx) const { return const_cast<SampledField*>(this)->at(idx); }

SampledField sample_field(int d, const LineGrid& grid, const std::function<double(const std::vector<double>&)>& f) {
  SampledField u{d, grid, {}};
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= grid.n;
  u.v.resize(total);
  std::vector<double> x(d);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t r = k;
    for (int a = d - 1; a >= 0; --a) {
      x[a] = grid.at(static_cast<int>(r % grid.n));
      r /= grid.n;
    }
    u.v[k] = f(x);
  }
  return u;
}

ConvolutionResult euclid_convolve(const Mollifier& m, const SampledField& u) {
  if (m.d != u.d) fail(Errc::dimension_mismatch, "mollifier and field dimensions differ");
  const int n = u.grid.n;
  const double h = u.grid.step;
  ConvolutionResult res;
  res.out = u;

  double peak = 0.0;
  for (double v : u.v) peak = std::max(peak, std::abs(v));

  // separable: one 1-d stencil per axis, sampled at the field's grid offsets
  for (int a = 0; a < u.d; ++a) {
    const LineGrid& mg = m.grids[a];
    int J = static_cast<int>(std::floor(std::max(std::abs(mg.lo), std::abs(mg.hi())) / h));
    J = std::min(J, n - 1);
    std::vector<double> k(2 * J + 1);
    for (int j = -J; j <= J; ++j) k[j + J] = m.kind == MollifierKind::DiscreteDelta ? (j == 0 ? 1.0 : 0.0)
                                                                                       : m.axis_value(a, j * h) * h;
    res.kernel_half = std::max(res.kernel_half, J);
    if (m.kind != MollifierKind::DiscreteDelta && axis_width(m, a) < 2.0 * h) res.resolved = false;

    // support check: u must vanish within reach of the boundary
    if (peak > 0.0 && J > 0) {
      for (std::size_t idx = 0; idx < res.out.v.size(); ++idx) {
        std::size_t stride = 1;
        for (int b = a + 1; b < u.d; ++b) stride *= n;
        const int i = static_cast<int>((idx / stride) % n);
        if ((i < J || i >= n - J) && std::abs(u.v[idx]) > 1e-12 * peak)
          fail(Errc::support_overflow, "field does not vanish within the kernel reach of the boundary");
      }
    }

    std::size_t stride = 1;
    for (int b = a + 1; b < u.d; ++b) stride *= n;
    const std::vector<double> in = res.out.v;
    const std::size_t total = in.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(total); ++idx) {
      const int i = static_cast<int>((idx / stride) % n);
      const std::ptrdiff_t base = idx - static_cast<std::ptrdiff_t>(i * stride);
      double s = 0.0;
      const int jlo = std::max(-J, i - (n - 1)), jhi = std::min(J, i);
      for (int j = jlo; j <= jhi; ++j) s += k[j + J] * in[base + static_cast<std::ptrdiff_t>((i - j) * stride)];
      res.out.v[idx] = s;
    }
  }
  return res;
}

}  // namespace regulab
