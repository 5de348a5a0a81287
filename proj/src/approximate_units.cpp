#include "regulab/approximate_units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "fft.hpp"
#include "regulab/error.hpp"

namespace regulab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double PlateauFunction::operator()(double x) const {
  x = std::abs(x);
  if (x <= a) return 1.0;
  if (strict) return std::exp(-x * x * std::exp(-1.0 / (x - a)));
  return smooth_transition((x - a) / (b - a));
}

PlateauFunction make_plateau(double a, double b, bool strict) {
  if (!(a > 0.0) || !(b > a)) fail(Errc::parameter_out_of_range, "plateau needs 0 < a < b");
  return {a, b, strict};
}

const char* to_string(UnitKind k) {
  switch (k) {
    case UnitKind::SpectralMultiplier: return "spectral-multiplier";
    case UnitKind::EuclideanMollifier: return "euclidean-mollifier";
    case UnitKind::HeisenbergMollifier: return "heisenberg-mollifier";
    case UnitKind::SchrodingerTransform: return "schrodinger-transform";
    case UnitKind::Pushforward: return "pushforward";
    case UnitKind::Custom: return "custom";
  }
  return "custom";
}

UnitNet profile_unit(const std::function<double(double)>& G, const EpsilonGrid& grid, const SpectralModel& model,
                     const std::string& detail) {
  UnitNet u{grid, {}, UnitKind::SpectralMultiplier, detail};
  const Eigen::VectorXd lam = model.lambdas();
  u.ops.reserve(grid.count);
  for (int j = 0; j < grid.count; ++j) {
    const double eps = grid.at(j);
    Eigen::VectorXcd d(model.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = G(eps * lam[i]);
    u.ops.push_back(SmoothingOp::diagonal(model, std::move(d)));
  }
  return u;
}

UnitNet spectral_unit(const PlateauFunction& F, const EpsilonGrid& grid, const SpectralModel& model) {
  std::ostringstream os;
  os << "plateau(a=" << F.a << ",b=" << F.b << (F.strict ? ",strict" : "") << ")";
  return profile_unit([F](double x) { return F(x); }, grid, model, os.str());
}

UnitNet zero_unit(const EpsilonGrid& grid, const SpectralModel& model) {
  UnitNet u{grid, std::vector<SmoothingOp>(grid.count, SmoothingOp::zero(model)), UnitKind::Custom, "zero"};
  return u;
}

std::vector<ScalarNet> sobolev_nets(const UnitNet& unit, const SpectralFunction& v, int n_max) {
  const Eigen::VectorXd L = v.model.lambdas().array().log1p();
  std::vector<std::vector<double>> vals(n_max + 1, std::vector<double>(unit.grid.count));
  for (int j = 0; j < unit.grid.count; ++j) {
    const Eigen::VectorXd a2 = unit.ops[j].apply(v.c).cwiseAbs2();
    for (int n = 0; n <= n_max; ++n) vals[n][j] = std::sqrt(((n * L).array().exp() * a2.array()).sum());
  }
  std::vector<ScalarNet> out;
  for (auto& v2 : vals) out.push_back(make_scalar_net(unit.grid, std::move(v2)));
  return out;
}

std::vector<ScalarNet> operator_nets(const UnitNet& unit, int n_max) {
  std::vector<std::vector<double>> vals(n_max + 1, std::vector<double>(unit.grid.count));
  for (int j = 0; j < unit.grid.count; ++j) {
    const GradedNormCache cache(unit.ops[j]);
    for (int n = 0; n <= n_max; ++n) vals[n][j] = cache.graded(n);
  }
  std::vector<ScalarNet> out;
  for (auto& v : vals) out.push_back(make_scalar_net(unit.grid, std::move(v)));
  return out;
}

const char* to_string(Signature s) {
  switch (s) {
    case Signature::Smooth: return "smooth";
    case Signature::NonSmooth: return "non-smooth";
    case Signature::Undetermined: return "undetermined";
  }
  return "undetermined";
}

SignatureReport order_signature(const std::vector<ScalarNet>& nets, const SignatureThresholds& th,
                                const std::vector<ScalarNet>* reference) {
  if (nets.empty()) fail(Errc::empty_input, "no nets");
  SignatureReport r;
  if (reference) {
    if (reference->size() != nets.size()) fail(Errc::dimension_mismatch, "reference nets");
    bool below = true;
    for (size_t n = 0; n < nets.size() && below; ++n)
      for (size_t j = 0; j < nets[n].values.size(); ++j)
        if (nets[n].values[j] > th.amplitude_floor * (*reference)[n].values[j]) {
          below = false;
          break;
        }
    r.below_floor = below;
  }
  for (const auto& net : nets) r.slopes.push_back(estimate_order(net, th.tail_fraction).slope);
  if (r.below_floor) {
    r.spread = 0.0;
    r.kind = Signature::Smooth;
    return r;
  }
  const auto [lo, hi] = std::minmax_element(r.slopes.begin(), r.slopes.end());
  r.spread = *hi - *lo;
  if (r.spread <= th.regular_spread)
    r.kind = Signature::Smooth;
  else if (r.spread >= th.singular_spread)
    r.kind = Signature::NonSmooth;
  else
    r.kind = Signature::Undetermined;
  return r;
}

std::string ValidationReport::first_failure() const {
  if (!item_a) return "item (a): moderate net";
  if (!item_b) return "item (b): convergence to the identity on distributions";
  if (!item_c) return "item (c): rapid convergence on smooth functions";
  return "";
}

ValidationReport validate_mau(const UnitNet& unit, const std::vector<NamedFunction>& dist_suite,
                              const std::vector<NamedFunction>& smooth_suite, const GradingConfig& grading,
                              const MauOptions& opt) {
  if (dist_suite.empty() || smooth_suite.empty()) fail(Errc::empty_input, "validation suites must be nonempty");
  if (grading.n_max < 4) fail(Errc::parameter_out_of_range, "n_max must be at least 4");
  const SpectralModel& model = unit.model();
  for (const auto& s : dist_suite)
    if (!(s.f.model == model)) fail(Errc::model_mismatch, "suite element " + s.name);
  for (const auto& s : smooth_suite)
    if (!(s.f.model == model)) fail(Errc::model_mismatch, "suite element " + s.name);

  ValidationReport rep;
  const int count = unit.grid.count;
  const int tail_len = static_cast<int>(std::ceil(opt.thresholds.tail_fraction * count - 1e-12));
  const int first = count - tail_len;

  {
    std::map<std::string, ScalarNet> nets;
    const auto on = operator_nets(unit, grading.n_max);
    for (int n = 0; n <= grading.n_max; ++n) nets[std::to_string(n)] = on[n];
    const Classification c = classify_net(nets, opt.thresholds);
    rep.item_a = c.kind != NetClass::Undetermined;
    rep.item_a_order = c.order;
    for (int n = 0; n <= grading.n_max; ++n) rep.item_a_slopes.push_back(c.fits.at(std::to_string(n)).slope);
  }

  const Eigen::VectorXd L = model.lambdas().array().log1p();
  auto diff_norm = [&](const SmoothingOp& T, const Eigen::VectorXcd& v, double n) {
    const Eigen::VectorXd a2 = (T.apply(v) - v).cwiseAbs2();
    return std::sqrt(((n * L).array().exp() * a2.array()).sum());
  };

  rep.item_b = true;
  for (const auto& s : dist_suite) {
    ItemBResult b{s.name, std::vector<double>(count), false};
    for (int j = 0; j < count; ++j) b.values[j] = diff_norm(unit.ops[j], s.f.c, -opt.minus_n0);
    bool monotone = true;
    for (int j = first + 1; j < count; ++j)
      if (b.values[j] > b.values[j - 1] * (1.0 + 1e-12)) monotone = false;
    b.pass = b.values.back() == 0.0 || (monotone && b.values.back() < b.values[first] * (1.0 - 1e-9));
    rep.item_b = rep.item_b && b.pass;
    rep.b_results.push_back(std::move(b));
  }

  rep.item_c = true;
  for (const auto& s : smooth_suite) {
    ItemCResult c{s.name, {}, true, true};
    for (int n = 0; n <= grading.n_max; ++n) {
      std::vector<double> v(count);
      for (int j = 0; j < count; ++j) v[j] = diff_norm(unit.ops[j], s.f.c, n);
      bool raw_zero = true;
      for (int j = first; j < count; ++j) raw_zero = raw_zero && v[j] == 0.0;
      c.exact_zero = c.exact_zero && raw_zero;
      // one ulp of ||f||_0 placed at the top frequency bounds the rounding of a dense operator
      const double ulp_floor =
          4 * std::numeric_limits<double>::epsilon() * sobolev_norm(s.f, 0) * std::exp(0.5 * n * L.maxCoeff());
      const double floor = std::max(opt.noise_floor * sobolev_norm(s.f, n), ulp_floor);
      const ScalarNet net = clamp_below(make_scalar_net(unit.grid, std::move(v)), floor);
      const OrderEstimate e = estimate_order(net, opt.thresholds.tail_fraction);
      const bool tail_zero = e.floored == e.last - e.first + 1;
      c.slopes.push_back(tail_zero ? std::numeric_limits<double>::infinity() : e.slope);
      c.pass = c.pass && is_negligible_fit(e, opt.thresholds);
    }
    rep.item_c = rep.item_c && c.pass;
    rep.c_results.push_back(std::move(c));
  }
  return rep;
}

namespace {

double geodesic(double d) {
  d = std::fmod(std::abs(d), 2 * kPi);
  return std::min(d, 2 * kPi - d);
}

int fft_size(int min_size, int samples) {
  int n = samples;
  while (n < min_size) n *= 2;
  return n;
}

}  // namespace

LocalityReport locality_decompose(const UnitNet& unit, double delta, const LocalityOptions& opt) {
  const SpectralModel& model = unit.model();
  if (!(delta > 0.0 && delta < 2 * kPi)) fail(Errc::delta_out_of_range, "delta must lie in (0, 2 pi)");
  const double half_diam = model.dim() == 1 ? kPi : kPi * std::sqrt(2.0);
  auto chi = [&](double r) {
    if (delta >= half_diam) return 1.0;
    return smooth_transition((r - 0.75 * delta) / (0.25 * delta));
  };
  const int S = opt.samples;
  const int count = unit.grid.count;
  std::vector<double> rem(count), loc(count);

  for (int j = 0; j < count; ++j) {
    const SmoothingOp& T = unit.ops[j];
    double peak = 0.0, nsup = 0.0, lsup = 0.0;
    std::vector<double> kabs, rdist;
    if (T.is_diagonal && model.dim() == 1) {
      const int N = fft_size(model.side(), S);
      std::vector<cplx> buf(N, 0.0);
      for (int k = -model.K; k <= model.K; ++k) buf[((k % N) + N) % N] += T.diag[model.index(k)] / (2 * kPi);
      detail::dft(buf, N, +1);
      for (int a = 0; a < S; ++a) {
        kabs.push_back(std::abs(buf[size_t(a) * (N / S)]));
        rdist.push_back(geodesic(2 * kPi * a / S));
      }
    } else if (T.is_diagonal) {
      const int Sd = std::min(S, 256);
      const int N = fft_size(model.side(), Sd);
      std::vector<cplx> buf(size_t(N) * N, 0.0);
      for (Eigen::Index i = 0; i < model.size(); ++i) {
        const auto k = model.freq(i);
        buf[size_t(((k[0] % N) + N) % N) * N + ((k[1] % N) + N) % N] += T.diag[i] / (4 * kPi * kPi);
      }
      detail::dft2(buf, N, N, +1);
      const int stride = N / Sd;
      for (int a = 0; a < Sd; ++a)
        for (int b = 0; b < Sd; ++b) {
          kabs.push_back(std::abs(buf[size_t(a * stride) * N + b * stride]));
          rdist.push_back(std::hypot(geodesic(2 * kPi * a / Sd), geodesic(2 * kPi * b / Sd)));
        }
    } else {
      if (model.dim() != 1) fail(Errc::parameter_out_of_range, "dense kernels are supported on the circle only");
      const int Sd = std::min(S, 1024);
      // k(x_a, y_b) = sum_{l,m} T_lm phi_l(x_a) conj(phi_m(y_b))
      Eigen::MatrixXcd Phi(Sd, model.side());
      for (int a = 0; a < Sd; ++a)
        for (int k = -model.K; k <= model.K; ++k)
          Phi(a, model.index(k)) = std::polar(1.0 / std::sqrt(2 * kPi), k * 2 * kPi * a / Sd);
      const Eigen::MatrixXcd Kx = Phi * T.dense * Phi.adjoint();
      for (int a = 0; a < Sd; ++a)
        for (int b = 0; b < Sd; ++b) {
          kabs.push_back(std::abs(Kx(a, b)));
          rdist.push_back(geodesic(2 * kPi * (a - b) / Sd));
        }
    }
    for (double v : kabs) peak = std::max(peak, v);
    const double floor = opt.noise_floor * peak;
    for (size_t i = 0; i < kabs.size(); ++i) {
      const double c = chi(rdist[i]);
      const double nv = kabs[i] * (1.0 - c), lv = kabs[i] * c;
      if (nv > floor) nsup = std::max(nsup, nv);
      lsup = std::max(lsup, lv);
    }
    rem[j] = nsup;
    loc[j] = lsup;
  }
  LocalityReport r;
  r.delta = delta;
  r.remainder_sup = make_scalar_net(unit.grid, std::move(rem));
  r.local_sup = make_scalar_net(unit.grid, std::move(loc));
  r.remainder_class = classify_net(r.remainder_sup, opt.thresholds);
  r.pass = r.remainder_class.kind == NetClass::Negligible;
  return r;
}

SignatureReport transfer_of_regularity_check(const UnitNet& unit, const SpectralFunction& u,
                                             const GradingConfig& grading, const SignatureThresholds& th) {
  return order_signature(sobolev_nets(unit, u, grading.n_max), th);
}

FunctionNet embed_distribution(const SpectralFunction& u, const UnitNet& unit) {
  if (!(u.model == unit.model())) fail(Errc::model_mismatch, "distribution and unit models differ");
  FunctionNet net{unit.grid, {}};
  for (const auto& T : unit.ops) net.values.push_back(T.apply(u.c));
  return net;
}

double CircleDiffeo::operator()(double x) const {
  double y = x + shift;
  for (size_t k = 0; k < a.size(); ++k) y += a[k] * std::cos((k + 1) * x);
  for (size_t k = 0; k < b.size(); ++k) y += b[k] * std::sin((k + 1) * x);
  return y;
}

double CircleDiffeo::derivative(double x) const {
  double d = 1.0;
  for (size_t k = 0; k < a.size(); ++k) d -= (k + 1) * a[k] * std::sin((k + 1) * x);
  for (size_t k = 0; k < b.size(); ++k) d += (k + 1) * b[k] * std::cos((k + 1) * x);
  return d;
}

bool CircleDiffeo::is_rotation() const {
  return std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; }) &&
         std::all_of(b.begin(), b.end(), [](double v) { return v == 0.0; });
}

CircleDiffeo identity_diffeo() { return {}; }
CircleDiffeo rotation_diffeo(double alpha) { return {alpha, {}, {}}; }
CircleDiffeo sine_diffeo(double amplitude) { return {0.0, {}, {amplitude}}; }

CircleDiffeo invert(const CircleDiffeo& chi, int modes) {
  const int S = 4 * modes;
  for (int j = 0; j < 8 * S; ++j)
    if (!(chi.derivative(2 * kPi * j / (8 * S)) > 0.0)) fail(Errc::non_invertible_diffeo, "lift derivative not positive");
  if (chi.is_rotation()) return rotation_diffeo(-chi.shift);
  std::vector<cplx> e(S);
  for (int j = 0; j < S; ++j) {
    const double y = 2 * kPi * j / S;
    double x = y - chi.shift;
    for (int it = 0; it < 100; ++it) {
      const double step = (chi(x) - y) / chi.derivative(x);
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    e[j] = x - y;
  }
  detail::dft(e, S, -1);
  CircleDiffeo inv;
  inv.shift = e[0].real() / S;
  inv.a.resize(modes - 1);
  inv.b.resize(modes - 1);
  for (int k = 1; k < modes; ++k) {
    inv.a[k - 1] = 2.0 * e[k].real() / S;
    inv.b[k - 1] = -2.0 * e[k].imag() / S;
  }
  double worst = 0.0;
  for (int j = 0; j < 1000; ++j) {
    const double y = 2 * kPi * (j + 0.37) / 1000;
    worst = std::max(worst, std::abs(chi(inv(y)) - y));
  }
  if (worst > 1e-8) fail(Errc::non_invertible_diffeo, "inverse series misses round trip tolerance");
  return inv;
}

SmoothingOp composition_operator(const CircleDiffeo& chi, const SpectralModel& model) {
  if (model.manifold != Manifold::Circle) fail(Errc::model_mismatch, "diffeomorphisms act on the circle model");
  if (chi.is_rotation()) {
    Eigen::VectorXcd d(model.size());
    for (int k = -model.K; k <= model.K; ++k) d[model.index(k)] = std::polar(1.0, k * chi.shift);
    return SmoothingOp::diagonal(model, std::move(d));
  }
  const int N = 8 * model.side();
  std::vector<double> xs(N);
  for (int j = 0; j < N; ++j) xs[j] = chi(2 * kPi * j / N);
  Eigen::MatrixXcd C(model.size(), model.size());
  const double s = 1.0 / std::sqrt(2 * kPi);
  for (int m = -model.K; m <= model.K; ++m) {
    Eigen::VectorXcd samp(N);
    for (int j = 0; j < N; ++j) samp[j] = std::polar(s, m * xs[j]);
    C.col(model.index(m)) = from_samples(model, samp, N).c;
  }
  return SmoothingOp::from_matrix(model, std::move(C));
}

double aliasing_tolerance(const CircleDiffeo& chi, const SpectralModel& model, double s) {
  const SmoothingOp C = composition_operator(chi, model);
  const SmoothingOp Ci = composition_operator(invert(chi), model);
  Eigen::MatrixXcd E = compose(C, Ci).matrix() - Eigen::MatrixXcd::Identity(model.size(), model.size());
  E = E * model.weights(-s / 2).asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(E);
  return svd.singularValues()(0);
}

PushforwardResult pushforward_unit(const CircleDiffeo& chi, const UnitNet& unit) {
  const SpectralModel& model = unit.model();
  const SmoothingOp C = composition_operator(chi, model);
  const SmoothingOp Ci = composition_operator(invert(chi), model);
  PushforwardResult r{UnitNet{unit.grid, {}, UnitKind::Pushforward, "pushforward(" + unit.detail + ")"}, 0.0};
  for (const auto& T : unit.ops) r.unit.ops.push_back(compose(compose(C, T), Ci));
  r.aliasing = aliasing_tolerance(chi, model, 2.0);
  return r;
}

}  // namespace regulab
