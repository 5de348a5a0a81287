#include "regulab/net_asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "regulab/error.hpp"

namespace regulab {

double EpsilonGrid::at(int j) const { return eps0 * std::pow(ratio, j); }

std::vector<double> EpsilonGrid::points() const {
  std::vector<double> p(count);
  for (int j = 0; j < count; ++j) p[j] = at(j);
  return p;
}

EpsilonGrid make_eps_grid(double eps0, double ratio, int count) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) fail(Errc::eps0_out_of_range, "eps0 must lie in (0,1)");
  if (!(ratio > 0.0 && ratio < 1.0)) fail(Errc::parameter_out_of_range, "ratio must lie in (0,1)");
  if (count < 8) fail(Errc::count_too_small, "grid needs at least 8 points");
  return EpsilonGrid{eps0, ratio, count};
}

EpsilonGrid default_eps_grid() { return make_eps_grid(0.5, 1.0 / std::sqrt(2.0), 24); }

ScalarNet make_scalar_net(const EpsilonGrid& grid, std::vector<double> values) {
  if (static_cast<int>(values.size()) != grid.count)
    fail(Errc::dimension_mismatch, "net length differs from grid count");
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0) fail(Errc::non_finite, "net values must be finite and nonnegative");
  return ScalarNet{grid, std::move(values)};
}

ScalarNet sample_net(const EpsilonGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.count);
  for (int j = 0; j < grid.count; ++j) v[j] = f(grid.at(j));
  return make_scalar_net(grid, std::move(v));
}

ScalarNet clamp_below(ScalarNet net, double floor) {
  for (double& v : net.values)
    if (v <= floor) v = 0.0;
  return net;
}

OrderEstimate estimate_order(const ScalarNet& net, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    fail(Errc::parameter_out_of_range, "tail_fraction must lie in (0,1]");
  const int m = static_cast<int>(net.values.size());
  const int len = static_cast<int>(std::ceil(tail_fraction * m - 1e-12));
  if (len < 3) fail(Errc::too_few_points, "fewer than 3 points in fit window");

  OrderEstimate e;
  e.first = m - len;
  e.last = m - 1;
  e.identically_zero = std::all_of(net.values.begin(), net.values.end(), [](double v) { return v == 0.0; });

  double sx = 0, sy = 0;
  std::vector<double> xs(len), ys(len);
  for (int i = 0; i < len; ++i) {
    const int j = e.first + i;
    double v = net.values[j];
    if (v < kValueFloor) {
      v = kValueFloor;
      ++e.floored;
    }
    xs[i] = std::log(net.grid.at(j));
    ys[i] = std::log(v);
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / len, my = sy / len;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < len; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  e.slope = sxy / sxx;
  e.intercept = my - e.slope * mx;
  if (syy <= 1e-300 * len) {
    e.r_squared = 1.0;
  } else {
    double ssr = 0;
    for (int i = 0; i < len; ++i) {
      const double r = ys[i] - (e.intercept + e.slope * xs[i]);
      ssr += r * r;
    }
    e.r_squared = std::clamp(1.0 - ssr / syy, 0.0, 1.0);
  }
  return e;
}

const char* to_string(NetClass c) {
  switch (c) {
    case NetClass::Moderate: return "moderate";
    case NetClass::Negligible: return "negligible";
    case NetClass::Undetermined: return "undetermined";
  }
  return "undetermined";
}

bool is_negligible_fit(const OrderEstimate& e, const Thresholds& th) {
  if (e.identically_zero) return true;
  const int len = e.last - e.first + 1;
  if (e.floored == len) return true;
  return e.slope >= th.negligible_slope;
}

Classification classify_net(const std::map<std::string, ScalarNet>& nets, const Thresholds& th) {
  if (nets.empty()) fail(Errc::empty_input, "no seminorm nets supplied");
  Classification c;
  bool all_negligible = true, unstable = false;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [id, net] : nets) {
    const OrderEstimate e = estimate_order(net, th.tail_fraction);
    c.fits[id] = e;
    if (is_negligible_fit(e, th)) continue;
    all_negligible = false;
    if (e.r_squared < th.min_r_squared) unstable = true;
    worst = std::max(worst, -e.slope);
  }
  if (all_negligible) {
    c.kind = NetClass::Negligible;
    c.order = -th.negligible_slope;
  } else if (unstable) {
    c.kind = NetClass::Undetermined;
    c.order = worst;
  } else {
    c.kind = NetClass::Moderate;
    c.order = worst;
  }
  return c;
}

Classification classify_net(const ScalarNet& net, const Thresholds& th) {
  return classify_net(std::map<std::string, ScalarNet>{{"0", net}}, th);
}

ScalarNet GeneralizedScalar::magnitude() const {
  std::vector<double> v(values.size());
  for (size_t i = 0; i < values.size(); ++i) v[i] = std::abs(values[i]);
  return make_scalar_net(grid, std::move(v));
}

GeneralizedScalar make_gen_scalar(const EpsilonGrid& grid, const std::function<cplx(double)>& f) {
  GeneralizedScalar g{grid, std::vector<cplx>(grid.count)};
  for (int j = 0; j < grid.count; ++j) g.values[j] = f(grid.at(j));
  return g;
}

namespace {

void require_ring_operands(const GeneralizedScalar& a, const GeneralizedScalar& b, const Thresholds& th) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size())
    fail(Errc::mismatched_grids, "generalized scalars live on different grids");
  if (classify_net(a.magnitude(), th).kind == NetClass::Undetermined ||
      classify_net(b.magnitude(), th).kind == NetClass::Undetermined)
    fail(Errc::not_moderate, "operand is not classified moderate");
}

}  // namespace

GeneralizedScalar gen_scalar_add(const GeneralizedScalar& a, const GeneralizedScalar& b, const Thresholds& th) {
  require_ring_operands(a, b, th);
  GeneralizedScalar r{a.grid, a.values};
  for (size_t i = 0; i < r.values.size(); ++i) r.values[i] += b.values[i];
  return r;
}

GeneralizedScalar gen_scalar_mul(const GeneralizedScalar& a, const GeneralizedScalar& b, const Thresholds& th) {
  require_ring_operands(a, b, th);
  GeneralizedScalar r{a.grid, a.values};
  for (size_t i = 0; i < r.values.size(); ++i) r.values[i] *= b.values[i];
  return r;
}

double sharp_valuation(const GeneralizedScalar& a, const GeneralizedScalar& b, double tail_fraction) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size())
    fail(Errc::mismatched_grids, "generalized scalars live on different grids");
  std::vector<double> d(a.values.size());
  for (size_t i = 0; i < d.size(); ++i) d[i] = std::abs(a.values[i] - b.values[i]);
  const ScalarNet net = make_scalar_net(a.grid, std::move(d));
  const OrderEstimate e = estimate_order(net, tail_fraction);
  if (e.identically_zero) return std::numeric_limits<double>::infinity();
  return e.slope;
}

FunctionNet pushforward_net(const Eigen::MatrixXcd& map, const FunctionNet& net) {
  FunctionNet out{net.grid, {}};
  out.values.reserve(net.values.size());
  for (const auto& v : net.values) {
    if (v.size() != map.cols()) fail(Errc::dimension_mismatch, "map and net dimensions differ");
    out.values.push_back(map * v);
  }
  return out;
}

ScalarNet norm_net(const FunctionNet& net, const std::function<double(const Eigen::VectorXcd&)>& norm) {
  std::vector<double> v(net.values.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = norm(net.values[i]);
  return make_scalar_net(net.grid, std::move(v));
}

}  // namespace regulab
