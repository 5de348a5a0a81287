#include "regulab/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "regulab/error.hpp"

namespace regulab {

namespace {

constexpr double kPi = std::numbers::pi;

double h_exp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

void require_same(const SpectralModel& a, const SpectralModel& b) {
  if (!(a == b)) fail(Errc::model_mismatch, "spectral models differ");
}

int wrap(int m, int N) { return ((m % N) + N) % N; }

}  // namespace

double smooth_transition(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = h_exp(1.0 - t), b = h_exp(t);
  return a / (a + b);
}

const char* to_string(Manifold m) { return m == Manifold::Circle ? "circle" : "torus2"; }

Eigen::Index SpectralModel::index(int m1, int m2) const {
  if (dim() == 1) return m1 + K;
  return Eigen::Index(m1 + K) * side() + (m2 + K);
}

bool SpectralModel::contains(int m1, int m2) const {
  if (std::abs(m1) > K) return false;
  return dim() == 1 ? m2 == 0 : std::abs(m2) <= K;
}

std::array<int, 2> SpectralModel::freq(Eigen::Index i) const {
  if (dim() == 1) return {int(i) - K, 0};
  return {int(i / side()) - K, int(i % side()) - K};
}

double SpectralModel::lambda(Eigen::Index i) const {
  const auto f = freq(i);
  return double(f[0]) * f[0] + double(f[1]) * f[1];
}

Eigen::VectorXd SpectralModel::lambdas() const {
  Eigen::VectorXd l(size());
  for (Eigen::Index i = 0; i < size(); ++i) l[i] = lambda(i);
  return l;
}

Eigen::VectorXd SpectralModel::weights(double s) const {
  Eigen::VectorXd w(size());
  for (Eigen::Index i = 0; i < size(); ++i) w[i] = std::pow(1.0 + lambda(i), s);
  return w;
}

double SpectralModel::basis_scale() const { return dim() == 1 ? 1.0 / std::sqrt(2 * kPi) : 1.0 / (2 * kPi); }

SpectralModel circle_model(int K) {
  if (K < 1) fail(Errc::parameter_out_of_range, "truncation K must be positive");
  return {Manifold::Circle, K};
}

SpectralModel torus_model(int K) {
  if (K < 1) fail(Errc::parameter_out_of_range, "truncation K must be positive");
  return {Manifold::Torus2, K};
}

SpectralFunction zero_function(const SpectralModel& m) { return {m, Eigen::VectorXcd::Zero(m.size())}; }

SpectralFunction from_coefficients(const SpectralModel& m, const std::function<cplx(int, int)>& coeff) {
  SpectralFunction f = zero_function(m);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const auto k = m.freq(i);
    f.c[i] = coeff(k[0], k[1]);
  }
  return f;
}

double sobolev_norm(const SpectralFunction& f, double n) {
  if (!f.c.allFinite()) fail(Errc::non_finite, "non-finite coefficients");
  double s = 0.0;
  for (Eigen::Index i = 0; i < f.c.size(); ++i) s += std::pow(1.0 + f.model.lambda(i), n) * std::norm(f.c[i]);
  return std::sqrt(s);
}

double growth_constant(const SpectralFunction& f, double s) {
  double c = 0.0;
  for (Eigen::Index i = 0; i < f.c.size(); ++i)
    c = std::max(c, std::abs(f.c[i]) * std::pow(1.0 + f.model.lambda(i), -s / 2));
  return c;
}

SpectralFunction retruncate(const SpectralFunction& f, const SpectralModel& target) {
  if (f.model.manifold != target.manifold) fail(Errc::model_mismatch, "different manifolds");
  SpectralFunction g = zero_function(target);
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    const auto k = target.freq(i);
    if (f.model.contains(k[0], k[1])) g.c[i] = f.c[f.model.index(k[0], k[1])];
  }
  return g;
}

SpectralFunction multiply(const SpectralFunction& f, const SpectralFunction& g, const SpectralModel& out) {
  if (f.model.manifold != g.model.manifold || f.model.manifold != out.manifold)
    fail(Errc::model_mismatch, "products need a common manifold");
  const SpectralFunction& a = f;
  const SpectralFunction& b = g;
  std::vector<Eigen::Index> nz;
  for (Eigen::Index i = 0; i < a.c.size(); ++i)
    if (a.c[i] != cplx(0.0)) nz.push_back(i);
  const double s = out.basis_scale();
  SpectralFunction r = zero_function(out);
  const int Kb = b.model.K, Ko = out.K;
  if (out.dim() == 1) {
    for (Eigen::Index i : nz) {
      const int k = a.model.freq(i)[0];
      const cplx ak = a.c[i] * s;
      const int lo = std::max(-Ko, k - Kb), hi = std::min(Ko, k + Kb);
      for (int l = lo; l <= hi; ++l) r.c[l + Ko] += ak * b.c[l - k + Kb];
    }
    return r;
  }
  const int sb = b.model.side(), so = out.side();
#pragma omp parallel for schedule(static)
  for (int l1 = -Ko; l1 <= Ko; ++l1) {
    for (Eigen::Index i : nz) {
      const auto k = a.model.freq(i);
      const int j1 = l1 - k[0];
      if (std::abs(j1) > Kb) continue;
      const cplx ak = a.c[i] * s;
      const int lo = std::max(-Ko, k[1] - Kb), hi = std::min(Ko, k[1] + Kb);
      const cplx* brow = b.c.data() + Eigen::Index(j1 + Kb) * sb;
      cplx* rrow = r.c.data() + Eigen::Index(l1 + Ko) * so;
      for (int l2 = lo; l2 <= hi; ++l2) rrow[l2 + Ko] += ak * brow[l2 - k[1] + Kb];
    }
  }
  return r;
}

SpectralFunction multiply(const SpectralFunction& f, const SpectralFunction& g) {
  require_same(f.model, g.model);
  return multiply(f, g, f.model);
}

Eigen::VectorXcd to_samples(const SpectralFunction& f, int N) {
  const SpectralModel& m = f.model;
  if (N < m.side()) fail(Errc::under_resolved_grid, "sample count below 2K+1");
  const double s = m.basis_scale();
  if (m.dim() == 1) {
    std::vector<cplx> buf(N, 0.0);
    for (int k = -m.K; k <= m.K; ++k) buf[wrap(k, N)] += f.c[m.index(k)] * s;
    detail::dft(buf, N, +1);
    return Eigen::Map<Eigen::VectorXcd>(buf.data(), N);
  }
  std::vector<cplx> buf(size_t(N) * N, 0.0);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const auto k = m.freq(i);
    buf[size_t(wrap(k[0], N)) * N + wrap(k[1], N)] += f.c[i] * s;
  }
  detail::dft2(buf, N, N, +1);
  return Eigen::Map<Eigen::VectorXcd>(buf.data(), Eigen::Index(N) * N);
}

SpectralFunction from_samples(const SpectralModel& m, const Eigen::VectorXcd& samples, int N) {
  if (N < m.side()) fail(Errc::under_resolved_grid, "sample count below 2K+1");
  SpectralFunction f = zero_function(m);
  if (m.dim() == 1) {
    if (samples.size() != N) fail(Errc::dimension_mismatch, "sample vector length");
    std::vector<cplx> buf(samples.data(), samples.data() + N);
    detail::dft(buf, N, -1);
    const double s = std::sqrt(2 * kPi) / N;
    for (int k = -m.K; k <= m.K; ++k) f.c[m.index(k)] = buf[wrap(k, N)] * s;
    return f;
  }
  if (samples.size() != Eigen::Index(N) * N) fail(Errc::dimension_mismatch, "sample array size");
  std::vector<cplx> buf(samples.data(), samples.data() + samples.size());
  detail::dft2(buf, N, N, -1);
  const double s = 2 * kPi / (double(N) * N);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const auto k = m.freq(i);
    f.c[i] = buf[size_t(wrap(k[0], N)) * N + wrap(k[1], N)] * s;
  }
  return f;
}

cplx evaluate(const SpectralFunction& f, double x1, double x2) {
  cplx acc = 0.0;
  for (Eigen::Index i = 0; i < f.c.size(); ++i) {
    const auto k = f.model.freq(i);
    acc += f.c[i] * std::polar(1.0, k[0] * x1 + k[1] * x2);
  }
  return acc * f.model.basis_scale();
}

SmoothingOp SmoothingOp::diagonal(const SpectralModel& m, Eigen::VectorXcd d) {
  if (d.size() != m.size()) fail(Errc::dimension_mismatch, "diagonal length");
  SmoothingOp t;
  t.model = m;
  t.is_diagonal = true;
  t.diag = std::move(d);
  return t;
}

SmoothingOp SmoothingOp::from_matrix(const SpectralModel& m, Eigen::MatrixXcd a) {
  if (a.rows() != m.size() || a.cols() != m.size()) fail(Errc::dimension_mismatch, "operator must be square over the index set");
  SmoothingOp t;
  t.model = m;
  t.is_diagonal = false;
  t.dense = std::move(a);
  return t;
}

SmoothingOp SmoothingOp::zero(const SpectralModel& m) { return diagonal(m, Eigen::VectorXcd::Zero(m.size())); }
SmoothingOp SmoothingOp::identity(const SpectralModel& m) { return diagonal(m, Eigen::VectorXcd::Ones(m.size())); }

SmoothingOp SmoothingOp::rank_one(const SpectralFunction& a, const SpectralFunction& b) {
  require_same(a.model, b.model);
  return from_matrix(a.model, a.c * b.c.transpose());
}

Eigen::MatrixXcd SmoothingOp::matrix() const {
  if (!is_diagonal) return dense;
  return diag.asDiagonal();
}

Eigen::VectorXcd SmoothingOp::apply(const Eigen::VectorXcd& v) const {
  if (v.size() != size()) fail(Errc::dimension_mismatch, "operand length");
  if (is_diagonal) return diag.cwiseProduct(v);
  return dense * v;
}

Eigen::MatrixXd SmoothingOp::abs2() const {
  if (is_diagonal) return diag.cwiseAbs2().asDiagonal();
  return dense.cwiseAbs2();
}

double weighted_hs_norm(const SmoothingOp& T, double p, double q) {
  const Eigen::VectorXd L = T.model.lambdas().array().log1p();
  const Eigen::VectorXd wp = (p * L).array().exp(), wq = (q * L).array().exp();
  if (T.is_diagonal) return std::sqrt((wp.cwiseProduct(wq).cwiseProduct(T.diag.cwiseAbs2())).sum());
  return std::sqrt(wp.dot(T.dense.cwiseAbs2() * wq));
}

std::vector<std::pair<double, double>> grading_pairs(double n) {
  if (n < 0) fail(Errc::parameter_out_of_range, "graded norm index must be nonnegative");
  std::vector<std::pair<double, double>> pairs;
  for (double p = -n; p <= 2 * n + 1e-9; p += 1.0) pairs.emplace_back(p, n - p);
  return pairs;
}

double op_graded_norm(const SmoothingOp& T, double n) { return GradedNormCache(T).graded(n); }

GradedNormCache::GradedNormCache(const SmoothingOp& T) : model_(T.model), diagonal_(T.is_diagonal) {
  if (diagonal_)
    d2_ = T.diag.cwiseAbs2();
  else
    a2_ = T.dense.cwiseAbs2();
  log1p_lambda_ = model_.lambdas().array().log1p();
}

double GradedNormCache::weighted(double p, double q) const {
  if (diagonal_) return std::sqrt((((p + q) * log1p_lambda_).array().exp() * d2_.array()).sum());
  const Eigen::VectorXd wp = (p * log1p_lambda_).array().exp(), wq = (q * log1p_lambda_).array().exp();
  return std::sqrt(wp.dot(a2_ * wq));
}

double GradedNormCache::graded(double n) const {
  double s = 0.0;
  for (const auto& [p, q] : grading_pairs(n)) s += weighted(p, q);
  return s;
}

SpectralFunction apply_op(const SmoothingOp& T, const SpectralFunction& u) {
  require_same(T.model, u.model);
  return {T.model, T.apply(u.c)};
}

cplx op_trace(const SmoothingOp& T) { return T.is_diagonal ? T.diag.sum() : T.dense.trace(); }

SmoothingOp adjoint(const SmoothingOp& T) {
  if (T.is_diagonal) return SmoothingOp::diagonal(T.model, T.diag.conjugate());
  return SmoothingOp::from_matrix(T.model, T.dense.adjoint());
}

SmoothingOp compose(const SmoothingOp& A, const SmoothingOp& B) {
  require_same(A.model, B.model);
  if (A.is_diagonal && B.is_diagonal) return SmoothingOp::diagonal(A.model, A.diag.cwiseProduct(B.diag));
  if (A.is_diagonal) return SmoothingOp::from_matrix(A.model, A.diag.asDiagonal() * B.dense);
  if (B.is_diagonal) return SmoothingOp::from_matrix(A.model, A.dense * B.diag.asDiagonal());
  return SmoothingOp::from_matrix(A.model, A.dense * B.dense);
}

bool Multiplier::in_char(double theta) const {
  for (const auto& [lo, hi] : elliptic_arcs) {
    const double d = std::remainder(theta - 0.5 * (lo + hi), 2 * kPi);
    if (std::abs(d) <= 0.5 * (hi - lo) + 1e-15) return false;
  }
  return true;
}

Multiplier multiplier_psido(const SpectralModel& m, const std::function<cplx(int, int)>& symbol, double order,
                            double bound_constant, std::vector<std::pair<double, double>> elliptic_arcs) {
  Eigen::VectorXcd d(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const auto k = m.freq(i);
    d[i] = symbol(k[0], k[1]);
    const double bound = bound_constant * std::pow(1.0 + m.lambda(i), order / 2);
    if (!std::isfinite(std::abs(d[i])) || std::abs(d[i]) > bound * (1 + 1e-12))
      fail(Errc::growth_bound_violation, "symbol exceeds C(1+lambda)^{m/2}");
  }
  return {SmoothingOp::diagonal(m, std::move(d)), order, std::move(elliptic_arcs)};
}

Multiplier cone_cutoff(const SpectralModel& m, double center, double core, double transition) {
  if (!(core > 0) || !(transition > 0)) fail(Errc::parameter_out_of_range, "cone angles must be positive");
  auto sym = [=](int k1, int k2) -> cplx {
    if (k1 == 0 && k2 == 0) return 0.0;
    const double d = std::abs(std::remainder(std::atan2(double(k2), double(k1)) - center, 2 * kPi));
    return smooth_transition((d - core) / transition);
  };
  return multiplier_psido(m, sym, 0.0, 1.0, {{center - core, center + core}});
}

Multiplier bessel_potential(const SpectralModel& m, double s) {
  auto sym = [=](int k1, int k2) -> cplx { return std::pow(1.0 + double(k1) * k1 + double(k2) * k2, s / 2); };
  return multiplier_psido(m, sym, s, 1.0, {{-kPi, kPi}});
}

SmoothingOp mult_operator(const SpectralFunction& f) {
  const SpectralModel& m = f.model;
  const double s = m.basis_scale();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m.size(), m.size());
  for (Eigen::Index l = 0; l < m.size(); ++l) {
    const auto kl = m.freq(l);
    for (Eigen::Index j = 0; j < m.size(); ++j) {
      const auto kj = m.freq(j);
      const int d1 = kl[0] - kj[0], d2 = kl[1] - kj[1];
      if (m.contains(d1, d2)) a(l, j) = s * f.c[m.index(d1, d2)];
    }
  }
  return SmoothingOp::from_matrix(m, std::move(a));
}

SmoothingOp compose_with_psido(const SmoothingOp& T, const SmoothingOp& P) { return compose(T, P); }

SpectralFunction tensor_evaluator(const std::vector<SpectralFunction>& us, const SmoothingOp& T) {
  if (us.empty()) fail(Errc::empty_input, "tensor evaluator needs at least one factor");
  SpectralFunction acc = apply_op(T, us.front());
  for (size_t i = 1; i < us.size(); ++i) acc = multiply(apply_op(T, us[i]), acc);
  return acc;
}

FunctionNet trace_action(const std::vector<cplx>& poly, const FunctionNet& phi_eval,
                         const std::vector<cplx>& unit_traces) {
  if (unit_traces.size() != phi_eval.values.size()) fail(Errc::mismatched_grids, "trace net and evaluation net differ");
  FunctionNet out = phi_eval;
  for (size_t j = 0; j < unit_traces.size(); ++j) {
    cplx p = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) p = p * unit_traces[j] + *it;
    out.values[j] *= p;
  }
  return out;
}

}  // namespace regulab
