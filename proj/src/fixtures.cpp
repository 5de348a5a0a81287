#include "regulab/fixtures.hpp"

#include <cmath>
#include <optional>
#include <numbers>
#include <random>

#include "regulab/error.hpp"

namespace regulab {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();

std::vector<double> phases(const SpectralModel& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 2 * kPi);
  std::vector<double> p(m.size());
  for (auto& v : p) v = U(rng);
  return p;
}

// growth g: |c_m| <= C (1 + lambda_m)^{g/2}
Fixture make(const std::string& name, const SpectralModel& m, bool smooth, double order,
             const std::function<cplx(int, int)>& coeff, std::optional<double> growth = std::nullopt) {
  Fixture f;
  f.name = name;
  f.smooth = smooth;
  f.sobolev_order = order;
  static_cast<SpectralFunction&>(f.u) = from_coefficients(m, coeff);
  f.u.declared_growth = growth;
  return f;
}

}  // namespace

std::vector<std::string> circle_suite_names() {
  return {"constant", "trig",     "bandlimited_random", "analytic", "gaussian_coeffs", "delta",
          "delta_prime", "delta_pi", "step",             "triangle", "h15_random",      "h05_random"};
}

Fixture circle_fixture(const std::string& name, const SpectralModel& m, std::uint64_t seed) {
  if (m.manifold != Manifold::Circle) fail(Errc::model_mismatch, "circle fixtures need the circle model");
  const double r = 1.0 / std::sqrt(2 * kPi);
  const double s2pi = std::sqrt(2 * kPi);
  const auto ph = phases(m, seed);
  auto phase = [&, K = m.K](int n) { return std::polar(1.0, ph[n + K]); };
  if (name == "constant") return make(name, m, true, kInf, [](int n, int) { return n == 0 ? cplx(1.0) : cplx(0.0); });
  if (name == "trig")
    return make(name, m, true, kInf, [](int n, int) -> cplx {
      if (std::abs(n) == 1) return 0.5;
      if (n == 3) return cplx(0.0, -0.25);
      if (n == -3) return cplx(0.0, 0.25);
      return 0.0;
    });
  if (name == "bandlimited_random")
    return make(name, m, true, kInf, [&](int n, int) { return std::abs(n) <= 8 ? phase(n) : cplx(0.0); });
  if (name == "analytic") return make(name, m, true, kInf, [](int n, int) { return cplx(std::exp(-std::abs(n))); });
  if (name == "gaussian_coeffs") return make(name, m, true, kInf, [](int n, int) { return cplx(std::exp(-n * n / 16.0)); });
  if (name == "delta") return make(name, m, false, -0.5, [r](int, int) { return cplx(r); }, 0.0);
  if (name == "delta_prime") return make(name, m, false, -1.5, [r](int n, int) { return cplx(0.0, n * r); }, 1.0);
  if (name == "delta_pi") return make(name, m, false, -0.5, [r](int n, int) { return cplx(n % 2 == 0 ? r : -r); }, 0.0);
  if (name == "step")  // indicator of (0, pi)
    return make(name, m, false, 0.5, [s2pi](int n, int) -> cplx {
      if (n == 0) return s2pi / 2;
      if (n % 2 == 0) return 0.0;
      return cplx(0.0, -2.0 / (n * s2pi));
    }, -1.0);
  if (name == "triangle")  // |x| on (-pi, pi)
    return make(name, m, false, 1.5, [s2pi](int n, int) -> cplx {
      if (n == 0) return kPi * s2pi / 2;
      if (n % 2 == 0) return 0.0;
      return -4.0 / (double(n) * n * s2pi);
    }, -2.0);
  if (name == "h15_random")
    return make(name, m, false, 1.5, [&](int n, int) { return phase(n) / (1.0 + double(n) * n); }, -2.0);
  if (name == "h05_random")
    return make(name, m, false, 0.5, [&](int n, int) { return phase(n) / std::sqrt(1.0 + double(n) * n); }, -1.0);
  fail(Errc::parameter_out_of_range, "unknown circle fixture " + name);
}

std::vector<Fixture> circle_suite(const SpectralModel& model, std::uint64_t seed) {
  std::vector<Fixture> out;
  for (const auto& n : circle_suite_names()) out.push_back(circle_fixture(n, model, seed));
  return out;
}

Fixture circle_sawtooth(const SpectralModel& m) {
  const double s2pi = std::sqrt(2 * kPi);
  return make("sawtooth", m, false, 0.5,
              [s2pi](int n, int) { return n == 0 ? cplx(0.0) : s2pi / cplx(0.0, 2.0 * n); }, -1.0);
}

std::vector<NamedFunction> smooth_members(const std::vector<Fixture>& suite) {
  std::vector<NamedFunction> out;
  for (const auto& f : suite)
    if (f.smooth) out.push_back({f.name, f.u});
  return out;
}

std::vector<NamedFunction> singular_members(const std::vector<Fixture>& suite) {
  std::vector<NamedFunction> out;
  for (const auto& f : suite)
    if (!f.smooth) out.push_back({f.name, f.u});
  return out;
}

std::vector<NamedFunction> all_members(const std::vector<Fixture>& suite) {
  std::vector<NamedFunction> out;
  for (const auto& f : suite) out.push_back({f.name, f.u});
  return out;
}

Fixture torus_fixture(const std::string& name, const SpectralModel& m) {
  if (m.manifold != Manifold::Torus2) fail(Errc::model_mismatch, "torus fixtures need the torus model");
  const double c = 1.0 / (2 * kPi);
  if (name == "delta") return make(name, m, false, -1.0, [c](int, int) { return cplx(c); }, 0.0);
  if (name == "sawtooth")  // (pi - x1)/2 on (0, 2 pi), constant in x2
    return make(name, m, false, 0.5, [](int k1, int k2) -> cplx {
      if (k2 != 0 || k1 == 0) return 0.0;
      return 2 * kPi / cplx(0.0, 2.0 * k1);
    }, -1.0);
  if (name == "tensor_jump")  // s(x1) s(x2)
    return make(name, m, false, 0.5, [](int k1, int k2) -> cplx {
      if (k1 == 0 || k2 == 0) return 0.0;
      return 2 * kPi / (cplx(0.0, 2.0 * k1) * cplx(0.0, 2.0 * k2));
    }, -1.0);
  if (name == "analytic")
    return make(name, m, true, kInf, [](int k1, int k2) { return cplx(std::exp(-(std::abs(k1) + std::abs(k2)) / 2.0)); });
  if (name == "trig")
    return make(name, m, true, kInf, [](int k1, int k2) -> cplx {
      if (k1 == 1 && k2 == 0) return 1.0;
      if (k1 == -2 && k2 == 3) return 0.5;
      return 0.0;
    });
  if (name == "bump")
    return make(name, m, true, kInf, [](int k1, int k2) { return cplx(std::exp(-(double(k1) * k1 + double(k2) * k2) / 8.0)); });
  fail(Errc::parameter_out_of_range, "unknown torus fixture " + name);
}

int window_band(double sigma) { return static_cast<int>(std::ceil(std::sqrt(2.0 * 36.85) / sigma)); }

SpectralFunction gaussian_window(const SpectralModel& m, double c1, double sigma, double c2) {
  if (!(sigma > 0.0)) fail(Errc::parameter_out_of_range, "window width must be positive");
  // periodization of exp(-x^2/(2 sigma^2)) has Fourier series sum_k (sigma/sqrt(2 pi)) e^{-sigma^2 k^2/2} e^{ik(x-c)}
  auto a = [sigma](int k, double c) { return std::polar(sigma / std::sqrt(2 * kPi) * std::exp(-sigma * sigma * k * k / 2), -k * c); };
  if (m.dim() == 1) return from_coefficients(m, [&](int k, int) { return a(k, c1) * std::sqrt(2 * kPi); });
  return from_coefficients(m, [&](int k1, int k2) { return a(k1, c1) * a(k2, c2) * (2 * kPi); });
}

}  // namespace regulab
