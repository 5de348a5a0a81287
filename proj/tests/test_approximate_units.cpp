#include <doctest.h>

#include <cmath>

#include "regulab/approximate_units.hpp"
#include "regulab/error.hpp"
#include "regulab/fixtures.hpp"

using namespace regulab;

namespace {

const double kPi = std::acos(-1.0);
const double kNegligible = 10.0;

}  // namespace

TEST_CASE("plateau function") {
  const PlateauFunction F{1.0, 2.0};
  CHECK(F(0.0) == 1.0);
  CHECK(F(1.0) == 1.0);
  CHECK(F(-0.7) == 1.0);
  CHECK(F(2.0) == 0.0);
  CHECK(F(3.0) == 0.0);
  double prev = 1.0;
  for (double x = 1.0; x <= 2.0; x += 1e-3) {
    CHECK(F(x) <= prev);
    CHECK(F(x) >= 0.0);
    prev = F(x);
  }
  const PlateauFunction S{1.0, 2.0, true};
  CHECK(S(0.5) == 1.0);
  CHECK(S(1.5) < S(1.2));
  CHECK(S(3.0) > 0.0);
  CHECK_THROWS_AS(make_plateau(1.0, 0.5), Error);
}

TEST_CASE("spectral unit entries") {
  const auto m = circle_model(16);
  const PlateauFunction F{};
  const auto unit = spectral_unit(F, make_eps_grid(1.0 / (16.0 * 16.0), 0.5, 8), m);
  for (const auto& T : unit.ops) CHECK(T.diag == Eigen::VectorXcd::Ones(m.size()));
  const auto one = spectral_unit(F, make_eps_grid(0.999999, 0.5, 8), m);
  CHECK(one.ops[0].diag[m.index(2)] == cplx(0.0));  // lambda = 4 beyond the support edge
  CHECK(one.ops[0].diag[m.index(1)] == cplx(1.0));
  // ||T_eps||_HS^2 at K = 512: direct-summation slope
  const auto m512 = circle_model(512);
  const auto u = spectral_unit(F, default_eps_grid(), m512);
  std::vector<double> v;
  for (const auto& T : u.ops) v.push_back(T.diag.squaredNorm());
  CHECK(estimate_order(make_scalar_net(u.grid, v)).slope == doctest::Approx(-0.5000217498582412).epsilon(1e-9));
}

TEST_CASE("validate_mau on the standard suite") {
  const auto m = circle_model(256);
  const auto suite = circle_suite(m);
  const auto unit = spectral_unit(PlateauFunction{}, default_eps_grid(), m);
  const auto rep = validate_mau(unit, singular_members(suite), smooth_members(suite), GradingConfig{});
  CHECK(rep.item_a);
  CHECK(rep.item_b);
  CHECK(rep.item_c);
  CHECK(rep.pass());
  CHECK(rep.first_failure().empty());
  for (const auto& c : rep.c_results) {
    if (c.exact_zero) continue;
    for (double s : c.slopes) CHECK(s >= kNegligible);
  }
}

TEST_CASE("a profile without plateau fails item (c)") {
  const auto m = circle_model(256);
  const auto suite = circle_suite(m);
  const auto unit = profile_unit([](double x) { return std::exp(-x); }, default_eps_grid(), m, "exp(-x)");
  const auto rep = validate_mau(unit, singular_members(suite), smooth_members(suite), GradingConfig{});
  CHECK(rep.item_a);
  CHECK_FALSE(rep.item_c);
  CHECK(rep.first_failure().find("(c)") != std::string::npos);
  // finite-order convergence: G(x) = 1 - x + ..., so ||T f - f|| ~ eps
  for (const auto& c : rep.c_results)
    if (c.name == "trig") CHECK(c.slopes[0] == doctest::Approx(1.0).epsilon(0.02));

  const auto zero = zero_unit(default_eps_grid(), m);
  const auto z = validate_mau(zero, singular_members(suite), smooth_members(suite), GradingConfig{});
  CHECK_FALSE(z.item_b);
  CHECK_FALSE(z.item_c);
}

TEST_CASE("a bridge starting at zero is still flat there") {
  // 1 - F(x) ~ exp(-b/x) near 0 when a = 0, so convergence on smooth functions stays rapid
  const auto m = circle_model(128);
  const auto suite = circle_suite(m);
  const auto unit = spectral_unit(PlateauFunction{0.0, 2.0}, default_eps_grid(), m);
  const auto rep = validate_mau(unit, singular_members(suite), smooth_members(suite), GradingConfig{});
  CHECK(rep.item_c);
  CHECK_THROWS_AS(make_plateau(0.0, 2.0), Error);
}

TEST_CASE("validate_mau rejects mismatched models") {
  const auto unit = spectral_unit(PlateauFunction{}, default_eps_grid(), circle_model(64));
  const auto suite = circle_suite(circle_model(32));
  CHECK_THROWS_AS(validate_mau(unit, singular_members(suite), smooth_members(suite), GradingConfig{}), Error);
}

TEST_CASE("locality decomposition") {
  const auto m = circle_model(512);
  const auto unit = spectral_unit(PlateauFunction{}, default_eps_grid(), m);
  const auto all = locality_decompose(unit, 3.5);
  for (double v : all.remainder_sup.values) CHECK(v == 0.0);
  CHECK(all.pass);
  CHECK_THROWS_AS(locality_decompose(unit, -1.0), Error);

  // constant kernel: mass far from the diagonal persists
  const auto small = circle_model(32);
  const auto c0 = from_coefficients(small, [](int n, int) { return cplx(n == 0 ? 1.0 : 0.0); });
  UnitNet rank_one{unit.grid, std::vector<SmoothingOp>(unit.grid.count, SmoothingOp::rank_one(c0, c0)),
                   UnitKind::Custom, "rank one"};
  CHECK_FALSE(locality_decompose(rank_one, 0.5).pass);

  // off-diagonal decay of a spectral unit needs eps * lambda_K well above the support edge on every grid point
  const auto wide = circle_model(16384);
  const auto deep = spectral_unit(PlateauFunction{}, make_eps_grid(0.5, 0.5, 26), wide);
  LocalityOptions opt;
  opt.samples = 65536;
  const auto rep = locality_decompose(deep, 0.5, opt);
  CHECK(rep.remainder_class.kind == NetClass::Negligible);
  CHECK(rep.pass);
}

TEST_CASE("transfer of regularity") {
  const auto m = circle_model(256);
  const auto unit = spectral_unit(PlateauFunction{}, default_eps_grid(), m);
  const auto band = transfer_of_regularity_check(unit, circle_fixture("trig", m).u, GradingConfig{});
  CHECK(band.kind == Signature::Smooth);
  for (double s : band.slopes) CHECK(std::abs(s) < 1e-9);
  const auto delta = transfer_of_regularity_check(unit, circle_fixture("delta", m).u, GradingConfig{});
  CHECK(delta.kind == Signature::NonSmooth);
  // summation oracle for ||F(eps Delta) delta||_n, about -(n + 1/2)/2
  const double oracle[] = {-0.25001087492912066, -0.7481954204525655, -1.2480082542585405, -1.7475134733876383,
                           -2.2469810673826447};
  for (int n = 0; n <= 4; ++n) CHECK(delta.slopes[n] == doctest::Approx(oracle[n]).epsilon(1e-9));
  CHECK(transfer_of_regularity_check(unit, circle_fixture("analytic", m).u, GradingConfig{}).kind == Signature::Smooth);
}

TEST_CASE("pushforward of units") {
  const auto m = circle_model(64);
  const auto unit = spectral_unit(PlateauFunction{}, default_eps_grid(), m);
  const auto same = pushforward_unit(identity_diffeo(), unit);
  for (int j = 0; j < unit.grid.count; ++j)
    CHECK((same.unit.ops[j].matrix() - unit.ops[j].matrix()).cwiseAbs().maxCoeff() < 1e-12);
  const auto rot = pushforward_unit(rotation_diffeo(0.7), unit);
  for (int j = 0; j < unit.grid.count; ++j)
    CHECK((rot.unit.ops[j].matrix() - unit.ops[j].matrix()).cwiseAbs().maxCoeff() < 1e-12);

  const auto chi = sine_diffeo(0.2);
  const auto inv = invert(chi);
  for (double x = 0; x < 2 * kPi; x += 0.1) CHECK(std::abs(inv(chi(x)) - x) < 1e-8);
  CHECK_THROWS_AS(invert(sine_diffeo(1.5)), Error);
}

TEST_CASE("sine pushforward keeps the unit properties") {
  const auto m = circle_model(128);
  const auto suite = circle_suite(m);
  const auto unit = spectral_unit(PlateauFunction{}, default_eps_grid(), m);
  const auto pushed = pushforward_unit(sine_diffeo(0.2), unit);
  const auto rep = validate_mau(pushed.unit, singular_members(suite), smooth_members(suite), GradingConfig{});
  CHECK(rep.item_a);
  CHECK(rep.item_b);
  CHECK(rep.item_c);
  for (const auto& c : rep.c_results)
    for (double s : c.slopes) CHECK(s >= kNegligible);
}

TEST_CASE("embedding of distributions") {
  const auto m = circle_model(256);
  const auto unit = spectral_unit(PlateauFunction{}, default_eps_grid(), m);
  auto l2 = [](const Eigen::VectorXcd& v) { return v.norm(); };
  const auto zero = embed_distribution(zero_function(m), unit);
  for (const auto& v : zero.values) CHECK(v.norm() == 0.0);

  const auto f = circle_fixture("trig", m).u, g = circle_fixture("bandlimited_random", m).u;
  const auto efg = embed_distribution(multiply(f, g), unit);
  const auto ef = embed_distribution(f, unit), eg = embed_distribution(g, unit);
  FunctionNet diff{unit.grid, {}};
  for (int j = 0; j < unit.grid.count; ++j)
    diff.values.push_back(efg.values[j] - multiply(SpectralFunction{m, ef.values[j]}, SpectralFunction{m, eg.values[j]}).c);
  CHECK(classify_net(norm_net(diff, l2)).kind == NetClass::Negligible);

  const auto d0 = embed_distribution(circle_fixture("delta", m).u, unit);
  const auto dpi = embed_distribution(circle_fixture("delta_pi", m).u, unit);
  FunctionNet dd{unit.grid, {}};
  for (int j = 0; j < unit.grid.count; ++j) dd.values.push_back(d0.values[j] - dpi.values[j]);
  CHECK(classify_net(norm_net(dd, l2)).kind == NetClass::Moderate);
}
