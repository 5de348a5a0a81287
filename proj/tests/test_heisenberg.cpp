#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "regulab/error.hpp"
#include "regulab/heisenberg.hpp"

using namespace regulab;

namespace {

constexpr double kPi = std::numbers::pi;

HPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  return HPoint{{u(rng)}, {u(rng)}, u(rng)};
}

double dist(const HPoint& a, const HPoint& b) {
  return std::max({std::abs(a.x[0] - b.x[0]), std::abs(a.xi[0] - b.xi[0]), std::abs(a.t - b.t)});
}

cplx gauss3(const HPoint& p) { return std::exp(-(p.x[0] * p.x[0] + p.xi[0] * p.xi[0] + p.t * p.t)); }

/// exp(-2 pi (x^2 + xi^2)) e^{2 pi i tau} exp(-2 pi tau^2)
cplx oscillating(const HPoint& p) {
  return std::exp(-2 * kPi * (p.x[0] * p.x[0] + p.xi[0] * p.xi[0] + p.t * p.t)) * std::polar(1.0, 2 * kPi * p.t);
}

double sup_on(const Sampled1D& a, const Eigen::VectorXcd& b, double window) {
  double m = 0.0;
  for (int i = 0; i < a.grid.n; ++i)
    if (std::abs(a.grid.at(i)) <= window) m = std::max(m, std::abs(a.v[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("group law on random triples") {
  std::mt19937_64 rng(11);
  const HPoint e{};
  for (int k = 0; k < 1000; ++k) {
    const HPoint p = random_point(rng), q = random_point(rng), r = random_point(rng);
    CHECK(dist(heis_compose(heis_compose(p, q), r), heis_compose(p, heis_compose(q, r))) <= 1e-12);
    CHECK(dist(heis_compose(p, heis_inverse(p)), e) <= 1e-12);
    CHECK(dist(heis_compose(heis_inverse(p), p), e) <= 1e-12);
    CHECK(heis_compose(p, e) == p);
  }
}

TEST_CASE("group law in exact rational arithmetic") {
  using Q = boost::multiprecision::cpp_rational;
  using P = HeisPoint<Q, 2>;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(-50, 50), den(1, 9);
  auto rq = [&] { return Q(num(rng), den(rng)); };
  for (int k = 0; k < 200; ++k) {
    const P p{{rq(), rq()}, {rq(), rq()}, rq()};
    const P q{{rq(), rq()}, {rq(), rq()}, rq()};
    const P r{{rq(), rq()}, {rq(), rq()}, rq()};
    CHECK(heis_compose(heis_compose(p, q), r) == heis_compose(p, heis_compose(q, r)));
    CHECK(heis_compose(p, heis_inverse(p)) == P{});
    // commutator lands in the center with value omega(p,q)
    const P c = heis_compose(heis_compose(p, q), heis_inverse(heis_compose(q, p)));
    CHECK(c == P{{}, {}, symplectic(p, q)});
  }
}

TEST_CASE("group law: worked example") {
  const HPoint r = heis_compose(HPoint{{1.0}, {0.0}, 0.0}, HPoint{{0.0}, {1.0}, 0.0});
  CHECK(r == HPoint{{1.0}, {1.0}, 0.5});
}

TEST_CASE("heis_dist and the simplified display") {
  const HPoint p{{1.0}, {0.0}, 0.0}, q{{0.0}, {1.0}, 0.0};
  CHECK(heis_dist(p, q, 1.0) == HPoint{{0.0}, {1.0}, -0.5});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ue(0.01, 1.0);
  int negated = 0;
  for (int k = 0; k < 100; ++k) {
    const HPoint a = random_point(rng), b = random_point(rng);
    const double eps = ue(rng);
    const auto c = compare_dist(a, b, eps);
    negated += c.relation == SignRelation::Negated;
    // linear in eps
    CHECK(dist(heis_dist(a, b, eps), heis_scale(eps, heis_dist(a, b, 1.0))) <= 1e-12);
  }
  CHECK(negated == 100);
  CHECK(compare_dist(p, HPoint{}, 0.5).relation == SignRelation::Equal);
}

TEST_CASE("Haar measure is left and right invariant") {
  const LineGrid g = centered_grid(0.1, 70);
  const cplx base = heis_integrate(gauss3, g);
  CHECK(std::abs(base - std::pow(kPi, 1.5)) < 1e-10);
  const HPoint q{{0.5}, {-0.3}, 0.2};
  CHECK(std::abs(heis_integrate(gauss3, g, q, Translation::Left) - base) < 1e-10);
  CHECK(std::abs(heis_integrate(gauss3, g, q, Translation::Right) - base) < 1e-10);
}

TEST_CASE("heis_convolve: zero input, quadrature identity, resolution flag") {
  const Mollifier m = gauss_hermite_mollifier(0, 3, 0.25, 24);
  const Mollifier me = scale_mollifier(m, 0.5, {1, 1, 1});
  const std::vector<HPoint> pts{{{0.0}, {0.0}, 0.0}, {{0.3}, {-0.2}, 0.4}, {{-1.0}, {0.5}, 0.1}};
  const auto z = heis_convolve(me, [](const HPoint&) { return cplx(0.0); }, pts);
  for (const cplx& v : z.values) CHECK(v == cplx(0.0));
  CHECK(z.resolved);

  // same nodes through heis_integrate with h(q) = rho(q) f(p q^{-1})
  const auto r = heis_convolve(me, gauss3, pts);
  const LineGrid& g = me.grids[0];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const HPoint p = pts[i];
    const cplx ref = heis_integrate(
        [&](const HPoint& q) {
          return me.axis_value(0, q.x[0]) * me.axis_value(1, q.xi[0]) * me.axis_value(2, q.t) *
                 gauss3(heis_compose(p, heis_inverse(q)));
        },
        g);
    CHECK(std::abs(r.values[i] - ref) < 1e-13);
  }
  // the node grid scales with rho_eps, so only a coarse base sampling is unresolved
  const auto coarse = heis_convolve(gauss_hermite_mollifier(0, 3, 0.75, 16), gauss3, pts);
  CHECK_FALSE(coarse.resolved);
  CHECK(coarse.floor_estimate > 100 * r.floor_estimate);
  CHECK_THROWS_AS(heis_convolve(gauss_hermite_mollifier(0, 2, 0.5, 12), gauss3, pts), Error);
}

TEST_CASE("heis_convergence on a Gaussian") {
  const Mollifier m = gauss_hermite_mollifier(2, 3, 0.5, 16);
  const std::vector<HPoint> pts{{{0.0}, {0.0}, 0.0}, {{0.4}, {-0.4}, 0.4}, {{-0.8}, {0.4}, 0.0}};
  const auto c = heis_convergence(m, make_eps_grid(0.5, 0.8, 8), gauss3, pts);
  CHECK(c.usable == 8);
  CHECK(c.fit.slope >= 3.0);
  for (std::size_t j = 1; j < c.error.values.size(); ++j) CHECK(c.error.values[j] < c.error.values[j - 1]);
}

TEST_CASE("STFT of a shifted Gaussian") {
  const auto cfg = default_transform_config();
  cfg.validate();
  const double a = 0.75;
  const auto f = sample_line(cfg.g.grid, [&](double t) { return cplx(unit_gaussian(t - a)); });
  CHECK(l2_norm(f) == doctest::Approx(1.0).epsilon(1e-12));
  const auto S = stft(cfg.g, f, cfg.x, cfg.xi);
  for (int i = 0; i < cfg.x.n; i += 7)
    for (int b = 0; b < cfg.xi.n; b += 5) {
      const double x = cfg.x.at(i), xi = cfg.xi.at(b);
      const double expect = std::exp(-kPi * (x - a) * (x - a) / 2) * std::exp(-kPi * xi * xi / 2);
      CHECK(std::abs(std::abs(S.V(i, b)) - expect) < 1e-12);
    }
  // Moyal: sum |V|^2 dx dxi = ||f||^2 ||g||^2
  CHECK(S.V.squaredNorm() * cfg.x.step * cfg.xi.step == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("STFT inversion and the cheap factorization") {
  const auto cfg = default_transform_config();
  const LineGrid& t = cfg.g.grid;
  const std::vector<Sampled1D> suite{cfg.g, sample_line(t, [](double x) { return cplx(smooth_bump(x)); }),
                                     sample_line(t, [](double x) { return cplx(unit_gaussian(x - 0.75)); })};
  for (const auto& f : suite) {
    const auto S = stft(cfg.g, f, cfg.x, cfg.xi);
    CHECK((stft_invert(cfg.g, S).v - f.v).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK((schrodinger_apply(cheap_factorize(f, cfg), cfg.g).v - f.v).cwiseAbs().maxCoeff() <= 1e-5);
  }
}

TEST_CASE("transform configuration checks") {
  auto cfg = default_transform_config();
  cfg.g.v *= 2.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = default_transform_config();
  cfg.xi = centered_grid(1.0 / 16, 100);
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = default_transform_config();
  cfg.x = centered_grid(0.1, 10);
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("Schrodinger kernel matches the direct action and is Hermitian") {
  const LineGrid t = centered_grid(1.0 / 8, 40);
  const auto F = sample_heis(centered_grid(1.0 / 8, 24), centered_grid(1.0 / 8, 32), centered_grid(0.25, 12),
                             [](const HPoint& p) {
                               return std::exp(-kPi * (p.x[0] * p.x[0] + p.xi[0] * p.xi[0])) *
                                      std::polar(std::exp(-kPi * p.t * p.t), 2 * kPi * p.t);
                             });
  const Eigen::MatrixXcd K = schrodinger_kernel(F, t);
  CHECK((K - K.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  const auto h = sample_line(t, [](double x) { return cplx(smooth_bump(x / 2), 0.3 * x * smooth_bump(x / 2)); });
  const Eigen::VectorXcd viaK = K * h.v * t.step;
  CHECK((schrodinger_apply(F, h).v - viaK).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(schrodinger_kernel(F, centered_grid(0.1, 40)), Error);
}

TEST_CASE("pihat(rho) pihat(F) = pihat(rho *_H F)") {
  const double eps = 0.25;
  const Mollifier me = scale_mollifier(gauss_hermite_mollifier(0, 3, 0.5, 12), eps, {1, 1, 1});
  const LineGrid x = centered_grid(0.25, 10), xi = centered_grid(0.25, 10), tau = centered_grid(0.25, 10);
  const LineGrid t = centered_grid(1.0 / 8, 40);
  const auto g = sample_line(t, [](double s) { return cplx(unit_gaussian(s)); });

  const auto F = sample_heis(x, xi, tau, oscillating);
  const Eigen::VectorXcd lhs = schrodinger_unit_kernel(me, t) * schrodinger_apply(F, g).v * t.step;

  std::vector<HPoint> pts;
  for (int a = 0; a < x.n; ++a)
    for (int b = 0; b < xi.n; ++b)
      for (int c = 0; c < tau.n; ++c) pts.push_back({{x.at(a)}, {xi.at(b)}, tau.at(c)});
  const auto conv = heis_convolve(me, oscillating, pts);
  HeisSampled3D H{x, xi, tau, conv.values};
  const auto rhs = schrodinger_apply(H, g);
  CHECK(sup_on(rhs, lhs, 1.5) < 1e-7);
  CHECK(rhs.v.cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("Schrodinger unit converges at high order on smooth inputs") {
  const auto cfg = default_transform_config();
  const LineGrid& t = cfg.g.grid;
  const std::vector<std::pair<std::string, Sampled1D>> suite{
      {"gaussian", cfg.g}, {"bump", sample_line(t, [](double x) { return cplx(smooth_bump(x / 2)); })}};
  const auto m = gauss_hermite_mollifier(4, 3, 0.25, 32);
  const auto grid = make_eps_grid(0.5, 0.7742636826811269, 10);
  const auto rep = schrodinger_unit(m, grid, t, suite);
  CHECK(rep.floor_eps > 0.0);
  for (std::size_t k = 0; k < suite.size(); ++k) {
    CHECK(rep.usable[k] >= 6);
    CHECK(rep.fits[k].slope >= 4.0);
  }
  for (int e = 0; e < grid.count; ++e) CHECK(rep.kernel_norm.values[e] <= rep.l1_norm.values[e] * (1 + 1e-9));
}
