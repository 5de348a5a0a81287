#include <doctest.h>

#include <cmath>

#include "regulab/error.hpp"
#include "regulab/euclid.hpp"

using namespace regulab;

namespace {

double bump2(double x) {
  const double t = x / 2;
  return std::abs(t) < 1 ? std::exp(-1 / (1 - t * t)) : 0.0;
}

double sup_diff(const SampledField& a, const SampledField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

}  // namespace

TEST_CASE("centered grid") {
  const LineGrid g = centered_grid(0.25, 4);
  CHECK(g.n == 9);
  CHECK(g.lo == -1.0);
  CHECK(g.hi() == 1.0);
  CHECK_THROWS_AS(centered_grid(0.0, 4), Error);
}

TEST_CASE("Gauss-Hermite moments vanish up to the declared order") {
  for (int M : {0, 2, 4}) {
    const Mollifier m = gauss_hermite_mollifier(M, 2, 0.25, 48);
    CHECK(m.moment_order == M + 1);
    CHECK(m.mass() == doctest::Approx(1.0).epsilon(1e-10));
    for (int a = 0; a <= m.moment_order; ++a)
      for (int b = 0; a + b <= m.moment_order; ++b)
        if (a + b > 0) CHECK(std::abs(m.moment({a, b})) < 1e-9);
  }
}

TEST_CASE("order-4 Gauss-Hermite profile: first nonvanishing moment") {
  // dense-quadrature reference: int x^6 rho = 15
  const Mollifier m = gauss_hermite_mollifier(4, 1, 0.125, 128);
  CHECK(m.moment({6}) == doctest::Approx(15.0).epsilon(1e-9));
  CHECK(m.moment({5}) == doctest::Approx(0.0));
}

TEST_CASE("too narrow a support window is rejected") {
  CHECK_THROWS_AS(gauss_hermite_mollifier(4, 1, 0.25, 24), Error);
  CHECK_THROWS_AS(gauss_hermite_mollifier(3, 1, 0.25, 48), Error);
}

TEST_CASE("plateau-inverse mollifier") {
  const PlateauFunction F{1.0, 2.0};
  // slow super-polynomial decay: the fourth moment needs a window of about 800
  CHECK_THROWS_AS(build_mollifier(F, 1, 0.25, 1600), Error);
  const Mollifier m = build_mollifier(F, 1, 0.25, 3200);
  CHECK(m.mass() == doctest::Approx(1.0).epsilon(1e-8));
  for (int k = 1; k <= 4; ++k) CHECK(std::abs(m.moment({k})) < 1e-6);
  CHECK_THROWS_AS(build_mollifier(F, 1, 0.5, 3200), Error);
}

TEST_CASE("scaling") {
  const Mollifier m = gauss_hermite_mollifier(4, 2, 0.25, 48);
  const Mollifier one = scale_mollifier(m, 1.0, {1, 1});
  CHECK(one.axis_value(0, 0.3) == doctest::Approx(m.axis_value(0, 0.3)));
  const Mollifier half = scale_mollifier(m, 0.5, {1, 1});
  CHECK(half.mass() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(half.axis_value(0, 0.0) == doctest::Approx(2.0 * m.axis_value(0, 0.0)));

  const Mollifier an = scale_mollifier(m, 0.25, {1, 2});
  CHECK(std::abs(an.mass() - 1.0) < 1e-7);
  CHECK(axis_width(an, 1) / axis_width(m, 1) == doctest::Approx(0.0625));
  CHECK(axis_width(an, 0) / axis_width(m, 0) == doctest::Approx(0.25));
  // rescaling replaces, not compounds, the previous scale
  const Mollifier again = scale_mollifier(half, 0.25, {1, 1});
  CHECK(again.grids[0].step == doctest::Approx(0.25 * 0.25));

  CHECK_THROWS_AS(scale_mollifier(m, 0.0, {1, 1}), Error);
  CHECK_THROWS_AS(scale_mollifier(m, 1.5, {1, 1}), Error);
  CHECK_THROWS_AS(scale_mollifier(m, 0.5, {1}), Error);
  CHECK_THROWS_AS(scale_mollifier(m, 0.5, {0, 1}), Error);
}

TEST_CASE("discrete delta convolves to the identity") {
  const LineGrid g = centered_grid(0.1, 40);
  const auto u = sample_field(2, g, [](const std::vector<double>& x) { return bump2(x[0]) * bump2(1.5 * x[1]); });
  const auto r = euclid_convolve(discrete_delta(2, 0.1, 3), u);
  CHECK(r.out.v == u.v);
}

TEST_CASE("convolution matches a direct sum") {
  const LineGrid g = centered_grid(0.05, 100);
  const auto u = sample_field(2, g, [](const std::vector<double>& x) { return bump2(x[0]) * bump2(x[1] + 0.3); });
  const Mollifier m = scale_mollifier(gauss_hermite_mollifier(2, 2, 0.25, 48), 0.2, {1, 1});
  const auto r = euclid_convolve(m, u);
  for (auto [i, k] : {std::pair{100, 100}, std::pair{70, 130}, std::pair{120, 40}}) {
    double s = 0.0;
    for (int a = 0; a < g.n; ++a)
      for (int b = 0; b < g.n; ++b)
        s += m.axis_value(0, (i - a) * g.step) * m.axis_value(1, (k - b) * g.step) * u.at({a, b}) * g.step * g.step;
    CHECK(r.out.at({i, k}) == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("convergence order on a bump follows the moment order") {
  const LineGrid g = centered_grid(1.0 / 1024, 8192);
  const auto u = sample_field(1, g, [](const std::vector<double>& x) { return bump2(x[0]); });
  const EpsilonGrid eg = make_eps_grid(0.5, 0.8, 18);
  double prev = 0.0;
  for (int M : {0, 2, 4}) {
    const Mollifier m = gauss_hermite_mollifier(M, 1, 0.25, 40);
    std::vector<double> err;
    for (double e : eg.points()) err.push_back(sup_diff(euclid_convolve(scale_mollifier(m, e, {1}), u).out, u));
    const auto est = estimate_order(make_scalar_net(eg, err));
    CHECK(est.slope >= m.moment_order - 1);
    CHECK(est.slope > prev);
    prev = est.slope;
  }
}

TEST_CASE("a jump does not converge near the discontinuity") {
  const LineGrid g = centered_grid(1.0 / 1024, 8192);
  const auto s = sample_field(1, g, [](const std::vector<double>& x) { return std::abs(x[0]) < 1 ? 1.0 : 0.0; });
  const Mollifier m = gauss_hermite_mollifier(4, 1, 0.25, 40);
  for (double e : {0.5, 0.1, 0.02}) {
    const auto r = euclid_convolve(scale_mollifier(m, e, {1}), s);
    double near = 0.0, away = 0.0;
    for (int i = 0; i < g.n; ++i) {
      const double d = std::abs(r.out.v[i] - s.v[i]);
      if (std::abs(g.at(i) - 1) < 0.1) near = std::max(near, d);
      if (std::abs(g.at(i)) < 0.3) away = std::max(away, d);
    }
    CHECK(near > 0.4);
    if (e < 0.05) CHECK(away < 1e-12);
  }
}

TEST_CASE("support overflow and resolution flags") {
  const LineGrid g = centered_grid(0.1, 20);
  const auto wide = sample_field(1, g, [](const std::vector<double>&) { return 1.0; });
  const Mollifier m = gauss_hermite_mollifier(2, 1, 0.25, 48);
  CHECK_THROWS_AS(euclid_convolve(scale_mollifier(m, 0.5, {1}), wide), Error);
  const LineGrid big = centered_grid(0.1, 200);
  const auto u = sample_field(1, big, [](const std::vector<double>& x) { return bump2(2 * x[0]); });
  CHECK_FALSE(euclid_convolve(scale_mollifier(m, 0.05, {1}), u).resolved);
  CHECK(euclid_convolve(scale_mollifier(m, 0.5, {1}), u).resolved);
  CHECK_THROWS_AS(euclid_convolve(gauss_hermite_mollifier(2, 2, 0.25, 48), u), Error);
}
