#include "regulab/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "regulab/error.hpp"

namespace regulab {

namespace {

constexpr double kPi = std::numbers::pi;

bool close_point(const HPoint& a, const HPoint& b, double tol) {
  return std::abs(a.x[0] - b.x[0]) <= tol && std::abs(a.xi[0] - b.xi[0]) <= tol && std::abs(a.t - b.t) <= tol;
}

/// Index offset s with x = s * dt; throws unless x lies on the t lattice.
int lattice_offset(double x, double dt) {
  const double s = x / dt;
  const double r = std::round(s);
  if (std::abs(s - r) > 1e-9) fail(Errc::mismatched_grids, "x grid does not lie on the t lattice");
  return static_cast<int>(r);
}

void require_centered(const LineGrid& g, const char* what) {
  if (g.n % 2 != 1 || std::abs(g.lo + (g.n - 1) / 2 * g.step) > 1e-12 * g.step * g.n)
    fail(Errc::mismatched_grids, std::string(what) + " grid must be centered with an odd point count");
}

/// E(b, j) = exp(-2 pi i xi_b t_j)
Eigen::MatrixXcd phase_matrix(const LineGrid& xi, const LineGrid& t) {
  Eigen::MatrixXcd E(xi.n, t.n);
  for (int b = 0; b < xi.n; ++b)
    for (int j = 0; j < t.n; ++j) E(b, j) = std::polar(1.0, -2 * kPi * xi.at(b) * t.at(j));
  return E;
}

}  // namespace

const char* to_string(SignRelation s) {
  switch (s) {
    case SignRelation::Equal: return "equal";
    case SignRelation::Negated: return "negated";
    case SignRelation::Other: return "other";
  }
  return "other";
}

DistComparison compare_dist(const HPoint& p, const HPoint& q, double eps, double tol) {
  DistComparison c;
  c.direct = heis_dist(p, q, eps);
  c.displayed = heis_dist_displayed(p, q, eps);
  if (close_point(c.direct, c.displayed, tol))
    c.relation = SignRelation::Equal;
  else if (close_point(c.direct, heis_scale(-1.0, c.displayed), tol))
    c.relation = SignRelation::Negated;
  return c;
}

// ---- group convolution ----

HeisConvolveResult heis_convolve(const Mollifier& m, const std::function<cplx(const HPoint&)>& f,
                                 const std::vector<HPoint>& points) {
  if (m.d != 3) fail(Errc::dimension_mismatch, "Heisenberg convolution needs a mollifier on R^3");
  std::array<std::vector<double>, 3> w;
  std::array<int, 3> center{};
  double peak = 1.0;
  HeisConvolveResult res;
  for (int a = 0; a < 3; ++a) {
    w[a] = m.axis_samples(a);
    for (double& v : w[a]) v *= m.grids[a].step;
    center[a] = (m.grids[a].n - 1) / 2;
    double pk = 0.0;
    for (double v : w[a]) pk = std::max(pk, std::abs(v));
    peak *= pk;
    if (m.kind != MollifierKind::DiscreteDelta && axis_width(m, a) < 2.0 * m.grids[a].step) res.resolved = false;
  }
  // nodes with negligible weight are skipped; the cut is far below double rounding of the sum
  struct Node {
    HPoint qinv;
    double w;
    bool coarse;
  };
  std::vector<Node> nodes;
  for (int i = 0; i < m.grids[0].n; ++i)
    for (int j = 0; j < m.grids[1].n; ++j)
      for (int k = 0; k < m.grids[2].n; ++k) {
        const double wt = w[0][i] * w[1][j] * w[2][k];
        if (std::abs(wt) < 1e-22 * peak) continue;
        HPoint q{{m.grids[0].at(i)}, {m.grids[1].at(j)}, m.grids[2].at(k)};
        const bool coarse = (i - center[0]) % 2 == 0 && (j - center[1]) % 2 == 0 && (k - center[2]) % 2 == 0;
        nodes.push_back({heis_inverse(q), wt, coarse});
      }

  const std::size_t P = points.size();
  res.values.assign(P, 0.0);
  res.coarse.assign(P, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t pi = 0; pi < static_cast<std::ptrdiff_t>(P); ++pi) {
    cplx fine = 0.0, coarse = 0.0;
    for (const Node& nd : nodes) {
      const cplx v = nd.w * f(heis_compose(points[pi], nd.qinv));
      fine += v;
      if (nd.coarse) coarse += 8.0 * v;
    }
    res.values[pi] = fine;
    res.coarse[pi] = coarse;
  }
  for (std::size_t i = 0; i < P; ++i)
    res.floor_estimate = std::max(res.floor_estimate, std::abs(res.values[i] - res.coarse[i]));
  return res;
}

cplx heis_integrate(const std::function<cplx(const HPoint&)>& h, const LineGrid& grid, const HPoint& q,
                    Translation side) {
  cplx s = 0.0;
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      for (int k = 0; k < grid.n; ++k) {
        const HPoint p{{grid.at(i)}, {grid.at(j)}, grid.at(k)};
        switch (side) {
          case Translation::None: s += h(p); break;
          case Translation::Left: s += h(heis_compose(q, p)); break;
          case Translation::Right: s += h(heis_compose(p, q)); break;
        }
      }
  return s * std::pow(grid.step, 3);
}

HeisConvergence heis_convergence(const Mollifier& m, const EpsilonGrid& grid,
                                 const std::function<cplx(const HPoint&)>& f, const std::vector<HPoint>& points) {
  HeisConvergence out;
  out.grid = grid;
  std::vector<double> err(grid.count), flo(grid.count);
  double fmax = 0.0;
  for (const HPoint& p : points) fmax = std::max(fmax, std::abs(f(p)));
  for (int j = 0; j < grid.count; ++j) {
    const Mollifier me = scale_mollifier(m, grid.at(j), {1, 1, 1});
    const HeisConvolveResult r = heis_convolve(me, f, points);
    double e = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) e = std::max(e, std::abs(r.values[i] - f(points[i])));
    err[j] = e;
    flo[j] = r.floor_estimate;
  }
  out.error = make_scalar_net(grid, err);
  out.floor = make_scalar_net(grid, flo);
  // usable: error well above both the quadrature floor and rounding of f
  const double rounding = 1e-13 * std::max(fmax, 1e-300);
  std::vector<double> xs, ys;
  for (int j = 0; j < grid.count; ++j) {
    if (err[j] > 10.0 * flo[j] && err[j] > rounding) {
      ++out.usable;
      out.smallest_usable_eps = grid.at(j);
    }
  }
  if (out.usable >= 2) {
    // fit over the leading run of usable points
    std::vector<double> vals;
    int last = -1;
    for (int j = 0; j < grid.count; ++j) {
      if (err[j] > 10.0 * flo[j] && err[j] > rounding)
        last = j;
      else
        break;
    }
    if (last >= 2) {
      vals.assign(err.begin(), err.begin() + last + 1);
      out.fit = estimate_order(ScalarNet{EpsilonGrid{grid.eps0, grid.ratio, last + 1}, vals}, 1.0);
    }
  }
  return out;
}

// ---- line functions and STFT ----

Sampled1D sample_line(const LineGrid& grid, const std::function<cplx(double)>& f) {
  Sampled1D s{grid, Eigen::VectorXcd(grid.n)};
  for (int i = 0; i < grid.n; ++i) s.v[i] = f(grid.at(i));
  return s;
}

double l2_norm(const Sampled1D& f) { return std::sqrt(f.v.squaredNorm() * f.grid.step); }

double unit_gaussian(double t) { return std::pow(2.0, 0.25) * std::exp(-kPi * t * t); }

double smooth_bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

StftSamples stft(const Sampled1D& g, const Sampled1D& f, const LineGrid& x, const LineGrid& xi) {
  if (g.grid.n != f.grid.n || g.grid.step != f.grid.step || g.grid.lo != f.grid.lo)
    fail(Errc::mismatched_grids, "window and signal must share one grid");
  require_centered(f.grid, "t");
  const double dt = f.grid.step;
  const int nt = f.grid.n;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(x.n, nt);
  for (int a = 0; a < x.n; ++a) {
    const int s = lattice_offset(x.at(a), dt);
    for (int j = 0; j < nt; ++j) {
      const int k = j - s;  // g(t_j - x_a) sits at index j - s
      if (k >= 0 && k < nt) H(a, j) = f.v[j] * std::conj(g.v[k]) * dt;
    }
  }
  return {x, xi, H * phase_matrix(xi, f.grid).transpose()};
}

Sampled1D stft_invert(const Sampled1D& g, const StftSamples& S) {
  require_centered(g.grid, "t");
  const double dt = g.grid.step;
  const int nt = g.grid.n;
  const Eigen::MatrixXcd W = S.V * phase_matrix(S.xi, g.grid).conjugate();
  Sampled1D out{g.grid, Eigen::VectorXcd::Zero(nt)};
  for (int a = 0; a < S.x.n; ++a) {
    const int s = lattice_offset(S.x.at(a), dt);
    for (int j = 0; j < nt; ++j) {
      const int k = j - s;
      if (k >= 0 && k < nt) out.v[j] += W(a, j) * g.v[k];
    }
  }
  out.v *= S.x.step * S.xi.step;
  return out;
}

void WindowedTransformConfig::validate() const {
  if (std::abs(l2_norm(g) - 1.0) > 1e-8) fail(Errc::parameter_out_of_range, "window must have unit L2 norm");
  if (std::abs(phi.v.sum() * phi.grid.step - 1.0) > 1e-8)
    fail(Errc::parameter_out_of_range, "tau profile must integrate to 1");
  require_centered(g.grid, "t");
  require_centered(x, "x");
  for (int a = 0; a < x.n; ++a) lattice_offset(x.at(a), g.grid.step);
  // xi must be one full period of the sampled transform, symmetric under xi -> -xi mod 1/dt
  if (std::abs(xi.n * xi.step * g.grid.step - 1.0) > 1e-9 || std::abs(xi.lo + 0.5 / g.grid.step) > 1e-9)
    fail(Errc::mismatched_grids, "xi grid must cover [-1/(2dt), 1/(2dt)) exactly");
}

WindowedTransformConfig default_transform_config(double T, double dt, double X, double dx, double dxi,
                                                 double tau_max, double dtau) {
  WindowedTransformConfig c;
  const LineGrid t = centered_grid(dt, static_cast<int>(std::lround(T / dt)));
  c.g = sample_line(t, [](double s) { return cplx(unit_gaussian(s)); });
  c.phi = sample_line(centered_grid(dtau, static_cast<int>(std::lround(tau_max / dtau))),
                      [](double s) { return cplx(std::exp(-kPi * s * s)); });
  c.x = centered_grid(dx, static_cast<int>(std::lround(X / dx)));
  const int nxi = static_cast<int>(std::lround(1.0 / (dt * dxi)));
  c.xi = LineGrid{-0.5 / dt, dxi, nxi};
  return c;
}

HeisSampled3D sample_heis(const LineGrid& x, const LineGrid& xi, const LineGrid& tau,
                          const std::function<cplx(const HPoint&)>& F) {
  HeisSampled3D s{x, xi, tau, std::vector<cplx>(static_cast<std::size_t>(x.n) * xi.n * tau.n)};
#pragma omp parallel for
  for (int a = 0; a < x.n; ++a)
    for (int b = 0; b < xi.n; ++b)
      for (int c = 0; c < tau.n; ++c) s.at(a, b, c) = F(HPoint{{x.at(a)}, {xi.at(b)}, tau.at(c)});
  return s;
}

namespace {

/// G(x, xi) = int F(x, xi, tau) e^{-2 pi i tau} dtau
Eigen::MatrixXcd tau_reduce(const HeisSampled3D& F) {
  Eigen::VectorXcd ph(F.tau.n);
  for (int c = 0; c < F.tau.n; ++c) ph[c] = std::polar(F.tau.step, -2 * kPi * F.tau.at(c));
  Eigen::MatrixXcd G(F.x.n, F.xi.n);
  for (int a = 0; a < F.x.n; ++a)
    for (int b = 0; b < F.xi.n; ++b) {
      cplx s = 0.0;
      for (int c = 0; c < F.tau.n; ++c) s += F.at(a, b, c) * ph[c];
      G(a, b) = s;
    }
  return G;
}

}  // namespace

Sampled1D schrodinger_apply(const HeisSampled3D& F, const Sampled1D& h) {
  require_centered(h.grid, "t");
  const double dt = h.grid.step;
  const int nt = h.grid.n;
  Eigen::MatrixXcd G = tau_reduce(F);
  for (int a = 0; a < F.x.n; ++a)
    for (int b = 0; b < F.xi.n; ++b) G(a, b) *= std::polar(1.0, -kPi * F.x.at(a) * F.xi.at(b));
  // W(a, j) = sum_b G(a, b) e^{-2 pi i xi_b t_j}
  const Eigen::MatrixXcd W = G * phase_matrix(F.xi, h.grid);
  Sampled1D out{h.grid, Eigen::VectorXcd::Zero(nt)};
  for (int a = 0; a < F.x.n; ++a) {
    const int s = lattice_offset(F.x.at(a), dt);
    for (int j = 0; j < nt; ++j) {
      const int k = j + s;  // h(t_j + x_a)
      if (k >= 0 && k < nt) out.v[j] += W(a, j) * h.v[k];
    }
  }
  out.v *= F.x.step * F.xi.step;
  return out;
}

Eigen::MatrixXcd schrodinger_kernel(const HeisSampled3D& F, const LineGrid& t) {
  if (std::abs(t.step - F.x.step) > 1e-12 * t.step) fail(Errc::mismatched_grids, "kernel grid step must equal the x step");
  const Eigen::MatrixXcd G = tau_reduce(F);
  const double x0 = F.x.lo;
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(t.n, t.n);
#pragma omp parallel for
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) {
      const double r = (t.at(j) - t.at(i) - x0) / F.x.step;
      const int a = static_cast<int>(std::lround(r));
      if (a < 0 || a >= F.x.n || std::abs(r - a) > 1e-9) continue;
      const double mid = 0.5 * (t.at(i) + t.at(j));
      cplx s = 0.0;
      for (int b = 0; b < F.xi.n; ++b) s += G(a, b) * std::polar(1.0, -2 * kPi * F.xi.at(b) * mid);
      K(i, j) = s * F.xi.step;
    }
  return K;
}

HeisSampled3D cheap_factorize(const Sampled1D& f, const WindowedTransformConfig& cfg) {
  cfg.validate();
  const StftSamples S = stft(cfg.g, f, cfg.x, cfg.xi);
  HeisSampled3D F{cfg.x, cfg.xi, cfg.phi.grid,
                  std::vector<cplx>(static_cast<std::size_t>(cfg.x.n) * cfg.xi.n * cfg.phi.grid.n)};
  const int nx = cfg.x.n, nxi = cfg.xi.n;
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < nxi; ++b) {
      // -x_a is x_{nx-1-a}; -xi_b is xi_{(nxi-b) mod nxi} by periodicity in xi
      const cplx v = S.V(nx - 1 - a, (nxi - b) % nxi) * std::polar(1.0, kPi * cfg.x.at(a) * cfg.xi.at(b));
      for (int c = 0; c < F.tau.n; ++c)
        F.at(a, b, c) = v * cfg.phi.v[c] * std::polar(1.0, 2 * kPi * F.tau.at(c));
    }
  return F;
}

Eigen::MatrixXcd schrodinger_unit_kernel(const Mollifier& m, const LineGrid& t) {
  if (m.d != 3) fail(Errc::dimension_mismatch, "Schrodinger unit needs a mollifier on R^3");
  // tensor factorization: K(t,y) = rho_tau^(1) * rho_xi^((y+t)/2) * rho_x(y - t)
  const std::vector<double> wt = m.axis_samples(2), wx = m.axis_samples(1);
  cplx A = 0.0;
  for (int k = 0; k < m.grids[2].n; ++k) A += wt[k] * std::polar(m.grids[2].step, -2 * kPi * m.grids[2].at(k));
  const int n = t.n;
  // (y+t)/2 runs over half steps t.lo + s * dt / 2, s = 0..2(n-1)
  std::vector<cplx> B(2 * n - 1);
#pragma omp parallel for
  for (int s = 0; s < 2 * n - 1; ++s) {
    const double mid = t.lo + 0.5 * s * t.step;
    cplx acc = 0.0;
    for (int j = 0; j < m.grids[1].n; ++j) acc += wx[j] * std::polar(1.0, -2 * kPi * m.grids[1].at(j) * mid);
    B[s] = acc * m.grids[1].step;
  }
  std::vector<double> R(2 * n - 1);
#pragma omp parallel for
  for (int s = 0; s < 2 * n - 1; ++s) R[s] = m.axis_value(0, (s - (n - 1)) * t.step);
  Eigen::MatrixXcd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) K(i, j) = A * B[i + j] * R[j - i + n - 1];
  return K;
}

SchrodingerUnitReport schrodinger_unit(const Mollifier& m, const EpsilonGrid& grid, const LineGrid& t,
                                       const std::vector<std::pair<std::string, Sampled1D>>& suite, double window) {
  SchrodingerUnitReport rep;
  rep.grid = grid;
  const int E = grid.count;
  std::vector<std::vector<double>> err(suite.size(), std::vector<double>(E));
  std::vector<double> l1(E), knorm(E);
  for (const auto& [name, f] : suite) {
    if (f.grid.n != t.n || f.grid.step != t.step) fail(Errc::mismatched_grids, "suite function not on the t grid");
    rep.names.push_back(name);
  }
  // rho_x(y - t) is sampled at spacing dt: below this eps the samples alias
  if (m.kind == MollifierKind::PlateauInverse)
    rep.floor_eps = (m.plateau.strict ? std::max(m.plateau.b, 12.0) : m.plateau.b) * t.step / kPi;
  else
    rep.floor_eps = 2.0 * t.step / axis_width(m, 0);
  for (int e = 0; e < E; ++e) {
    const Mollifier me = scale_mollifier(m, grid.at(e), {1, 1, 1});
    const Eigen::MatrixXcd K = schrodinger_unit_kernel(me, t);
    double l = 1.0;
    for (int a = 0; a < 3; ++a) {
      const std::vector<double> v = me.axis_samples(a);
      double s = 0.0;
      for (double x : v) s += std::abs(x);
      l *= s * me.grids[a].step;
    }
    l1[e] = l;
    const Eigen::MatrixXcd Ks = K * t.step;
    const Eigen::MatrixXcd KK = Ks.adjoint() * Ks;
    knorm[e] = std::sqrt(std::max(0.0, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(KK, Eigen::EigenvaluesOnly)
                                           .eigenvalues()
                                           .maxCoeff()));
    for (std::size_t k = 0; k < suite.size(); ++k) {
      const Eigen::VectorXcd g = K * suite[k].second.v * t.step;
      double mx = 0.0;
      for (int i = 0; i < t.n; ++i)
        if (std::abs(t.at(i)) <= window) mx = std::max(mx, std::abs(g[i] - suite[k].second.v[i]));
      err[k][e] = mx;
    }
  }
  rep.l1_norm = make_scalar_net(grid, l1);
  rep.kernel_norm = make_scalar_net(grid, knorm);
  for (std::size_t k = 0; k < suite.size(); ++k) {
    rep.errors.push_back(make_scalar_net(grid, err[k]));
    int last = -1;
    for (int e = 0; e < E; ++e) {
      if (grid.at(e) >= rep.floor_eps && err[k][e] > 1e-12)
        last = e;
      else
        break;
    }
    rep.usable.push_back(last + 1);
    if (last + 1 >= 6) {
      std::vector<double> v(err[k].begin(), err[k].begin() + last + 1);
      rep.fits.push_back(estimate_order(ScalarNet{EpsilonGrid{grid.eps0, grid.ratio, last + 1}, v}, 0.5));
    } else {
      rep.fits.push_back(OrderEstimate{});
    }
  }
  return rep;
}

}  // namespace regulab
