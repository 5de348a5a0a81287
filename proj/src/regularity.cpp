#include "regulab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "regulab/error.hpp"
#include "regulab/fixtures.hpp"

namespace regulab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 1.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  if (syy > 1e-28 * std::max(1.0, my * my)) {
    double sse = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      sse += r * r;
    }
    f.r2 = 1.0 - sse / syy;
  }
  return f;
}

double sobolev_value(const Eigen::VectorXcd& c, const Eigen::VectorXd& log1p_lambda, double n) {
  return std::sqrt(((n * log1p_lambda).array().exp() * c.cwiseAbs2().array()).sum());
}

RegClass from_signature(Signature s) {
  switch (s) {
    case Signature::Smooth: return RegClass::Regular;
    case Signature::NonSmooth: return RegClass::NonRegular;
    case Signature::Undetermined: return RegClass::Undetermined;
  }
  return RegClass::Undetermined;
}

}  // namespace

// ---- Sobolev order ----

SobolevEstimate sobolev_order_estimate(const SpectralFunction& u) {
  const SpectralModel& m = u.model;
  if (m.K < 64) fail(Errc::parameter_out_of_range, "Sobolev order estimate needs K >= 64");
  SobolevEstimate est;
  std::vector<double> energy;
  for (int j = 1; (1 << (j + 1)) - 1 <= m.K; ++j) {
    const double lo = 1 << j, hi = 1 << (j + 1);
    double e = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const auto k = m.freq(i);
      const double r = std::hypot(double(k[0]), double(k[1]));
      if (r >= lo && r < hi) e += std::norm(u.c[i]);
    }
    est.shell_L.push_back(lo * std::numbers::sqrt2);
    energy.push_back(e);
  }
  est.shell_energy = energy;
  if (energy.empty() || energy.back() == 0.0) {
    est.order = kInf;
    est.fit.identically_zero = true;
    return est;
  }
  std::vector<double> x, y;
  for (std::size_t j = 0; j < energy.size(); ++j)
    if (energy[j] > 0.0) {
      x.push_back(std::log(est.shell_L[j]));
      y.push_back(std::log(energy[j]));
    }
  if (x.size() < 3) fail(Errc::too_few_points, "fewer than three nonzero dyadic shells");
  const LineFit f = least_squares(x, y);
  est.fit.slope = f.slope;
  est.fit.intercept = f.intercept;
  est.fit.r_squared = f.r2;
  est.fit.first = 0;
  est.fit.last = static_cast<int>(energy.size()) - 1;
  est.order = -f.slope / 2.0;
  return est;
}

// ---- evaluators ----

DistributionEvaluator DistributionEvaluator::from_distribution(SpectralFunction u) {
  DistributionEvaluator e;
  e.kind_ = Kind::FromDistribution;
  e.model_ = u.model;
  e.us_ = {std::move(u)};
  return std::move(e).finalize();
}

DistributionEvaluator DistributionEvaluator::tensor(std::vector<SpectralFunction> us) {
  if (us.empty()) fail(Errc::empty_input, "tensor evaluator needs a factor");
  for (const auto& u : us)
    if (!(u.model == us.front().model)) fail(Errc::model_mismatch, "tensor factors must share a model");
  DistributionEvaluator e;
  e.kind_ = Kind::Tensor;
  e.model_ = us.front().model;
  e.us_ = std::move(us);
  return std::move(e).finalize();
}

DistributionEvaluator DistributionEvaluator::trace_scaled(std::vector<cplx> poly, DistributionEvaluator base) {
  DistributionEvaluator e;
  e.kind_ = Kind::TraceScaled;
  e.model_ = base.model_;
  e.poly_ = std::move(poly);
  e.base_ = std::make_shared<const DistributionEvaluator>(std::move(base));
  return std::move(e).finalize();
}

DistributionEvaluator DistributionEvaluator::psido_shifted(SmoothingOp P, DistributionEvaluator base) {
  if (!(P.model == base.model_)) fail(Errc::model_mismatch, "operator and evaluator models differ");
  DistributionEvaluator e;
  e.kind_ = Kind::PsiDOShifted;
  e.model_ = base.model_;
  e.P_ = std::move(P);
  e.base_ = std::make_shared<const DistributionEvaluator>(std::move(base));
  return std::move(e).finalize();
}

DistributionEvaluator DistributionEvaluator::module_action(SpectralFunction f, DistributionEvaluator base) {
  if (f.model.manifold != base.model_.manifold) fail(Errc::model_mismatch, "cutoff on another manifold");
  DistributionEvaluator e;
  e.kind_ = Kind::ModuleAction;
  e.model_ = base.model_;
  e.us_ = {std::move(f)};
  e.base_ = std::make_shared<const DistributionEvaluator>(std::move(base));
  return std::move(e).finalize();
}

DistributionEvaluator DistributionEvaluator::zero(const SpectralModel& m) {
  DistributionEvaluator e;
  e.kind_ = Kind::Zero;
  e.model_ = m;
  return std::move(e).finalize();
}

DistributionEvaluator&& DistributionEvaluator::finalize() && {
  linear_ = compute_linear();
  return std::move(*this);
}

std::optional<SpectralFunction> DistributionEvaluator::compute_linear() const {
  switch (kind_) {
    case Kind::FromDistribution: return us_.front();
    case Kind::Zero: return zero_function(model_);
    case Kind::PsiDOShifted: {
      auto v = base_->as_distribution();
      if (!v) return std::nullopt;
      return apply_op(*P_, *v);
    }
    case Kind::ModuleAction: {
      auto v = base_->as_distribution();
      if (!v) return std::nullopt;
      return multiply(us_.front(), *v, model_);
    }
    default: return std::nullopt;
  }
}

SpectralFunction DistributionEvaluator::operator()(const SmoothingOp& T) const {
  switch (kind_) {
    case Kind::FromDistribution: return apply_op(T, us_.front());
    case Kind::Zero: return zero_function(model_);
    case Kind::Tensor: return tensor_evaluator(us_, T);
    case Kind::TraceScaled: {
      const cplx tr = op_trace(T);
      cplx p = 0.0;
      for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) p = p * tr + *it;
      SpectralFunction r = (*base_)(T);
      r.c *= p;
      return r;
    }
    case Kind::PsiDOShifted:
      if (linear_) return apply_op(T, *linear_);
      return (*base_)(compose(T, *P_));
    case Kind::ModuleAction:
      if (linear_) return apply_op(T, *linear_);
      return (*base_)(compose(T, mult_operator(retruncate(us_.front(), model_))));
  }
  return zero_function(model_);
}

std::string DistributionEvaluator::describe() const {
  switch (kind_) {
    case Kind::FromDistribution: return "theta(u)";
    case Kind::Zero: return "zero";
    case Kind::Tensor: return "tensor(" + std::to_string(us_.size()) + ")";
    case Kind::TraceScaled: return "trace-scaled(" + base_->describe() + ")";
    case Kind::PsiDOShifted: return "psido(" + base_->describe() + ")";
    case Kind::ModuleAction: return "module(" + base_->describe() + ")";
  }
  return "?";
}

// ---- test family ----

std::vector<std::string> OperatorFamily::sequences() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& m : members)
    if (!m.sequence.empty() && seen.insert(m.sequence).second) out.push_back(m.sequence);
  return out;
}

std::vector<SmoothingOp> random_operators(const SpectralModel& m, int count, double decay, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const Eigen::VectorXd w = m.weights(-decay);
  std::vector<SmoothingOp> out;
  out.reserve(count);
  const Eigen::Index N = m.size();
  for (int c = 0; c < count; ++c) {
    Eigen::MatrixXcd a(N, N);
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j) {
        const double re = nd(rng), im = nd(rng);
        a(i, j) = cplx(re, im) * (w[i] / std::numbers::sqrt2);
      }
    out.push_back(SmoothingOp::from_matrix(m, std::move(a)));
  }
  return out;
}

OperatorFamily make_test_family(const SpectralModel& m, const FamilyOptions& opt,
                                const std::optional<SpectralFunction>& probe) {
  OperatorFamily fam;
  fam.model = m;
  // scaled spectral units whose cutoff frequency stays within half the band
  const UnitNet unit = spectral_unit(opt.plateau, opt.unit_grid, m);
  for (int j = 0; j < opt.unit_grid.count; ++j) {
    const double eps = opt.unit_grid.at(j);
    if (std::sqrt(opt.plateau.b / eps) > m.K / 2.0) continue;
    fam.members.push_back({unit.ops[j], "unit", 1.0 / std::sqrt(eps), std::nullopt, std::nullopt});
  }
  // rank-one extremizers along dyadic shells of the first axis
  for (int L = 2; 2 * L <= m.K; L *= 2) {
    for (int sign : {1, -1}) {
      SpectralFunction a = zero_function(m);
      a.c[m.index(sign * L, 0)] = 1.0;
      SpectralFunction flat = zero_function(m), pr = zero_function(m);
      for (int k = L; k < 2 * L; ++k) {
        flat.c[m.index(sign * k, 0)] = 1.0;
        if (probe) pr.c[m.index(sign * k, 0)] = std::conj(probe->c[probe->model.index(sign * k, 0)]);
      }
      flat.c /= flat.c.norm();
      const std::string s = sign > 0 ? "+" : "-";
      fam.members.push_back({SmoothingOp::rank_one(a, flat), "flat" + s, double(L), a, flat});
      if (probe && pr.c.norm() > 0.0) {
        pr.c /= pr.c.norm();
        fam.members.push_back({SmoothingOp::rank_one(a, pr), "probe" + s, double(L), a, pr});
      }
    }
  }
  for (auto& T : random_operators(m, opt.n_random, opt.row_decay, opt.seed))
    fam.members.push_back({std::move(T), "", 0.0, std::nullopt, std::nullopt});
  return fam;
}

// ---- tameness ----

namespace {

/// Graded operator norms with memoization; rank-one members use their factors.
class NormTable {
 public:
  NormTable(const FamilyMember& m) : mem_(m) {
    log1p_ = m.T.model.lambdas().array().log1p();
  }
  double graded(double n) {
    const auto key = static_cast<long>(std::lround(2 * n));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    double s = 0.0;
    if (mem_.a && mem_.b) {
      for (const auto& [p, q] : grading_pairs(n)) s += sobolev_value(mem_.a->c, log1p_, p) * sobolev_value(mem_.b->c, log1p_, q);
    } else {
      if (!cache_) cache_.emplace(mem_.T);
      s = cache_->graded(n);
    }
    memo_[key] = s;
    return s;
  }

 private:
  const FamilyMember& mem_;
  Eigen::VectorXd log1p_;
  std::optional<GradedNormCache> cache_;
  std::map<long, double> memo_;
};

}  // namespace

TamenessEstimate tameness_fit(const DistributionEvaluator& phi, const OperatorFamily& family,
                              const TamenessOptions& opt) {
  const int nm = opt.n_max;
  const Eigen::VectorXd log1p = family.model.lambdas().array().log1p();
  const std::size_t M = family.members.size();
  // ||phi(T)||_n for every member and n
  std::vector<std::vector<double>> val(M, std::vector<double>(nm + 1));
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(M); ++i) {
    const SpectralFunction v = phi(family.members[i].T);
    for (int n = 0; n <= nm; ++n) val[i][n] = sobolev_value(v.c, log1p, n);
  }
  std::vector<NormTable> norms;
  norms.reserve(M);
  for (const auto& m : family.members) norms.emplace_back(m);

  const std::vector<std::string> seqs = family.sequences();
  // worst log-log growth slope of the ratio along the sequences, for (r, k, n)
  auto growth = [&](double r, int k, int n) {
    double worst = -kInf;
    for (const auto& s : seqs) {
      std::vector<double> x, y;
      for (std::size_t i = 0; i < M; ++i) {
        if (family.members[i].sequence != s) continue;
        const double num = val[i][n];
        const double den = std::pow(norms[i].graded(n + r), k);
        if (num <= 0.0 || den <= 0.0) continue;
        x.push_back(std::log(family.members[i].L));
        y.push_back(std::log(num / den));
      }
      if (x.size() >= 2) worst = std::max(worst, least_squares(x, y).slope);
    }
    return worst;
  };

  const bool linear = phi.is_linear();
  const int kmax = linear ? 1 : opt.k_max;
  TamenessEstimate est;
  est.b = opt.b;
  for (int k = 1; k <= kmax && !est.determined; ++k) {
    std::vector<std::pair<double, double>> table;
    bool found = false, all = true;
    double first = 0.0;
    for (int h = -2 * nm; h <= 2 * nm; ++h) {
      const double r = 0.5 * h;
      const int n0 = static_cast<int>(std::ceil(opt.b + std::abs(r) - 1e-12));
      double worst = -kInf;
      for (int n = n0; n <= nm; ++n) worst = std::max(worst, growth(r, k, n));
      table.emplace_back(r, worst);
      const bool ok = worst <= opt.growth_tolerance;
      if (ok && !found) {
        found = true;
        first = r;
      }
      if (!ok) all = false;
    }
    if (found) {
      est.determined = true;
      est.degree = first;
      est.k = k;
      est.uniform_over_r = all;
      est.worst_growth = table;
    } else if (k == kmax) {
      est.worst_growth = table;
    }
  }
  if (est.determined) {
    const double r = est.degree;
    const int n0 = static_cast<int>(std::ceil(opt.b + std::abs(r) - 1e-12));
    for (int n = n0; n <= nm; ++n) {
      double C = 0.0;
      for (std::size_t i = 0; i < M; ++i) {
        const double den = std::pow(norms[i].graded(n + r), est.k);
        if (den > 0.0) C = std::max(C, val[i][n] / den);
      }
      est.C[n] = C;
      const double g = growth(r, est.k, n);
      est.residuals[n] = std::isfinite(g) ? g : 0.0;
    }
  }
  return est;
}

PtBoundReport verify_pt_bound(const SpectralFunction& u, double k, const std::vector<SmoothingOp>& ops, double n,
                              double rel_tol) {
  PtBoundReport rep;
  rep.min_slack = kInf;
  const Eigen::VectorXd log1p = u.model.lambdas().array().log1p();
  const double uk = sobolev_value(u.c, log1p, k);
  // does (n, -k) appear among the grading pairs of ||.||_{n-k}?
  bool pair_in_grading = false;
  if (n - k >= 0)
    for (const auto& [p, q] : grading_pairs(n - k))
      if (std::abs(p - n) < 1e-12 && std::abs(q + k) < 1e-12) pair_in_grading = true;
  for (const SmoothingOp& T : ops) {
    const double lhs = sobolev_value(T.apply(u.c), log1p, n);
    const double mid = weighted_hs_norm(T, n, -k);
    const double rhs = mid * uk;
    ++rep.checked;
    if (lhs > rhs * (1.0 + rel_tol) + 1e-300) ++rep.violations;
    if (rhs > 0.0) {
      rep.worst_ratio = std::max(rep.worst_ratio, lhs / rhs);
      rep.min_slack = std::min(rep.min_slack, (rhs - lhs) / rhs);
    }
    if (pair_in_grading && mid > op_graded_norm(T, n - k) * (1.0 + 1e-12)) ++rep.middle_violations;
  }
  if (!std::isfinite(rep.min_slack)) rep.min_slack = 0.0;
  return rep;
}

// ---- Reg ----

const char* to_string(RegClass c) {
  switch (c) {
    case RegClass::Regular: return "regular";
    case RegClass::NonRegular: return "non-regular";
    case RegClass::Undetermined: return "undetermined";
  }
  return "undetermined";
}

std::vector<ScalarNet> evaluator_nets(const DistributionEvaluator& phi, const UnitNet& unit, int n_max) {
  if (!(phi.model() == unit.model())) fail(Errc::model_mismatch, "evaluator and unit models differ");
  if (auto v = phi.as_distribution()) return sobolev_nets(unit, *v, n_max);
  const Eigen::VectorXd log1p = unit.model().lambdas().array().log1p();
  std::vector<std::vector<double>> vals(n_max + 1, std::vector<double>(unit.grid.count));
  for (int j = 0; j < unit.grid.count; ++j) {
    const SpectralFunction w = phi(unit.ops[j]);
    for (int n = 0; n <= n_max; ++n) vals[n][j] = sobolev_value(w.c, log1p, n);
  }
  std::vector<ScalarNet> out;
  for (auto& v : vals) out.push_back(make_scalar_net(unit.grid, std::move(v)));
  return out;
}

RegSignature regular_signature(const DistributionEvaluator& phi, const UnitNet& unit, const GradingConfig& grading,
                               const SignatureThresholds& th, const std::vector<ScalarNet>* reference) {
  RegSignature r;
  r.nets = evaluator_nets(phi, unit, grading.n_max);
  r.detail = order_signature(r.nets, th, reference);
  r.kind = from_signature(r.detail.kind);
  return r;
}

// ---- singular support ----

std::vector<int> SingularSupportReport::singular_windows() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < windows.size(); ++i)
    if (windows[i].singular == RegClass::NonRegular) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> SingularSupportReport::support_windows() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < windows.size(); ++i)
    if (windows[i].in_support) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<SpectralFunction> circle_windows(const SpectralModel& m, int count, double sigma) {
  if (count < 1) fail(Errc::parameter_out_of_range, "need at least one window");
  const int J = window_band(sigma);
  if (J > m.K) fail(Errc::unresolvable_cutoff, "window band exceeds the truncation");
  std::vector<SpectralFunction> out;
  for (int j = 0; j < count; ++j) out.push_back(gaussian_window(circle_model(J), 2 * kPi * j / count, sigma));
  return out;
}

SingularSupportReport singular_support_map(const SpectralFunction& u, const UnitNet& unit,
                                           const std::vector<SpectralFunction>& windows, const GradingConfig& grading,
                                           const SignatureThresholds& th) {
  const SpectralModel& m = unit.model();
  if (u.model.manifold != m.manifold || u.model.K < m.K) fail(Errc::model_mismatch, "distribution narrower than the unit");
  const SpectralFunction u0 = retruncate(u, m);
  const std::vector<ScalarNet> ref = sobolev_nets(unit, u0, grading.n_max);
  SingularSupportReport rep;
  rep.windows.resize(windows.size());
  for (std::size_t w = 0; w < windows.size(); ++w) {
    if (windows[w].model.K > m.K) fail(Errc::unresolvable_cutoff, "cutoff band exceeds the truncation");
    const SpectralFunction fu = multiply(windows[w], u, m);
    const auto phi = DistributionEvaluator::from_distribution(fu);
    const RegSignature sig = regular_signature(phi, unit, grading, th, &ref);
    WindowFlag& flag = rep.windows[w];
    flag.singular = sig.kind;
    flag.spread = sig.detail.spread;
    flag.below_floor = sig.detail.below_floor;
    // support: f . (T_eps u) not negligible once values under the amplitude floor are discarded
    std::vector<double> vals(unit.grid.count);
    const SpectralFunction fw = retruncate(windows[w], m);
    for (int j = 0; j < unit.grid.count; ++j) {
      const SpectralFunction Tu = apply_op(unit.ops[j], u0);
      const double v = multiply(fw, Tu, m).c.norm();
      vals[j] = v <= th.amplitude_floor * ref[0].values[j] ? 0.0 : v;
    }
    flag.in_support = classify_net(make_scalar_net(unit.grid, vals)).kind != NetClass::Negligible;
  }
  return rep;
}

// ---- wavefront ----

std::vector<std::pair<int, int>> WavefrontReport::singular() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t w = 0; w < flags.size(); ++w)
    for (std::size_t b = 0; b < flags[w].size(); ++b)
      if (flags[w][b] == RegClass::NonRegular) out.emplace_back(int(w), int(b));
  return out;
}

std::vector<std::pair<int, int>> WavefrontReport::undetermined() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t w = 0; w < flags.size(); ++w)
    for (std::size_t b = 0; b < flags[w].size(); ++b)
      if (flags[w][b] == RegClass::Undetermined) out.emplace_back(int(w), int(b));
  return out;
}

EpsilonGrid torus_eps_grid() { return make_eps_grid(0.5, std::pow(2.0, -0.5), 21); }

WavefrontReport wavefront_estimate(const SpectralFunction& u, const UnitNet& unit, const WavefrontOptions& opt) {
  const SpectralModel& m = unit.model();
  if (m.manifold != Manifold::Torus2 || u.model.manifold != Manifold::Torus2)
    fail(Errc::model_mismatch, "wavefront estimation runs on the torus");
  if (u.model.K < m.K) fail(Errc::model_mismatch, "distribution narrower than the unit");
  const double half_angle = kPi / opt.bins;
  if (half_angle < kPi / 16 - 1e-12) fail(Errc::unresolvable_cutoff, "bins narrower than pi/16 half-angle");
  const int J = window_band(opt.sigma);
  if (J > m.K) fail(Errc::unresolvable_cutoff, "window band exceeds the truncation");

  WavefrontReport rep;
  rep.bin_core = half_angle / 2;
  rep.bin_transition = half_angle / 2;
  std::vector<Eigen::VectorXcd> cones;
  for (int b = 0; b < opt.bins; ++b) {
    const double c = (b + 0.5) * 2 * kPi / opt.bins;
    rep.bin_centers.push_back(c);
    cones.push_back(cone_cutoff(m, c, rep.bin_core, rep.bin_transition).op.diag);
  }
  const int W = opt.windows_per_axis;
  for (int i = 0; i < W; ++i)
    for (int j = 0; j < W; ++j) rep.window_centers.push_back({(i + 0.5) * 2 * kPi / W, (j + 0.5) * 2 * kPi / W});

  const std::vector<ScalarNet> ref = sobolev_nets(unit, retruncate(u, m), opt.grading.n_max);
  const SpectralModel wm = torus_model(J);
  const std::size_t NW = rep.window_centers.size();
  rep.flags.assign(NW, std::vector<RegClass>(opt.bins, RegClass::Undetermined));
  rep.slopes.assign(NW, std::vector<std::vector<double>>(opt.bins));
  rep.spreads.assign(NW, std::vector<double>(opt.bins, 0.0));
  for (std::size_t w = 0; w < NW; ++w) {
    const SpectralFunction f = gaussian_window(wm, rep.window_centers[w][0], opt.sigma, rep.window_centers[w][1]);
    const SpectralFunction fu = multiply(f, u, m);
    for (int b = 0; b < opt.bins; ++b) {
      SpectralFunction v{m, fu.c.cwiseProduct(cones[b])};
      const auto phi = DistributionEvaluator::from_distribution(std::move(v));
      const RegSignature sig = regular_signature(phi, unit, opt.grading, opt.thresholds, &ref);
      rep.flags[w][b] = sig.kind;
      rep.slopes[w][b] = sig.detail.slopes;
      rep.spreads[w][b] = sig.detail.spread;
    }
  }
  return rep;
}

// ---- order shift ----

PsidoShiftReport psido_shift_check(const Multiplier& P, const DistributionEvaluator& phi, const OperatorFamily& family,
                                   const TamenessOptions& opt, double tolerance) {
  PsidoShiftReport rep;
  rep.order = P.order;
  rep.base = tameness_fit(phi, family, opt);
  rep.shifted = tameness_fit(DistributionEvaluator::psido_shifted(P.op, phi), family, opt);
  if (rep.base.determined && rep.shifted.determined) {
    rep.shift = rep.shifted.degree - rep.base.degree;
    rep.pass = rep.shifted.degree <= rep.base.degree + P.order + tolerance;
  }
  return rep;
}

double psido_equivariance_defect(const SmoothingOp& P, const SpectralFunction& u, const std::vector<SmoothingOp>& ops) {
  const SpectralFunction Pu = apply_op(P, u);
  double worst = 0.0;
  for (const auto& T : ops) {
    // left side through the composed matrix T P, right side through the coefficients P u
    const Eigen::VectorXcd lhs = compose(T, P).apply(u.c);
    const Eigen::VectorXcd rhs = T.apply(Pu.c);
    const double den = rhs.norm();
    if (den > 0.0) worst = std::max(worst, (lhs - rhs).norm() / den);
  }
  return worst;
}

// ---- diffeomorphisms ----

EquivarianceReport diffeo_equivariance(const CircleDiffeo& chi, const SpectralFunction& u,
                                       const std::vector<SmoothingOp>& ops, double rotation_tol) {
  const SpectralModel& m = u.model;
  EquivarianceReport rep;
  rep.rotation = chi.is_rotation();
  const SmoothingOp C = composition_operator(chi, m);
  const SmoothingOp Ci = composition_operator(invert(chi), m);
  rep.aliasing = rep.rotation ? rotation_tol : aliasing_tolerance(chi, m, 2.0);
  const SpectralFunction pulled = apply_op(C, u);
  const Eigen::VectorXd log1p = m.lambdas().array().log1p();
  for (const auto& T : ops) {
    // (chi . Theta_u)(T) = C phi(Ci T C) = C Ci T C u
    const Eigen::VectorXcd lhs = C.apply(Ci.apply(T.apply(C.apply(u.c))));
    const Eigen::VectorXcd rhs = T.apply(pulled.c);
    const double d = (lhs - rhs).norm();
    rep.max_abs = std::max(rep.max_abs, d);
    const double scale = sobolev_value(rhs, log1p, 2.0);
    if (scale > 0.0) rep.max_rel = std::max(rep.max_rel, d / scale);
  }
  rep.pass = rep.max_rel <= rep.aliasing * (1.0 + 1e-9) + 1e-15;
  return rep;
}

}  // namespace regulab
