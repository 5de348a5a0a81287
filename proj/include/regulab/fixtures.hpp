#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "regulab/approximate_units.hpp"
#include "regulab/spectral_model.hpp"

namespace regulab {

struct Fixture {
  std::string name;
  SpectralDistribution u;
  bool smooth = false;
  /// Sup of t with u in H^t; +inf for smooth members.
  double sobolev_order = std::numeric_limits<double>::infinity();
};

/// The twelve-element circle suite: five smooth members, seven singular ones.
std::vector<Fixture> circle_suite(const SpectralModel& model, std::uint64_t seed = 7);
Fixture circle_fixture(const std::string& name, const SpectralModel& model, std::uint64_t seed = 7);
std::vector<std::string> circle_suite_names();

/// (pi - x)/2 on (0, 2 pi): coefficients sqrt(2 pi)/(2 i n).
Fixture circle_sawtooth(const SpectralModel& model);

std::vector<NamedFunction> smooth_members(const std::vector<Fixture>& suite);
std::vector<NamedFunction> singular_members(const std::vector<Fixture>& suite);
std::vector<NamedFunction> all_members(const std::vector<Fixture>& suite);

/// Torus fixtures: "delta", "sawtooth" (jump along x1 = 0), "tensor_jump", "analytic", "trig", "bump".
Fixture torus_fixture(const std::string& name, const SpectralModel& model);

/// Periodized Gaussian window exp(-d(x,c)^2 / (2 sigma^2)); coefficients are exact up to rounding.
SpectralFunction gaussian_window(const SpectralModel& model, double c1, double sigma, double c2 = 0.0);
/// Smallest band J with exp(-sigma^2 J^2 / 2) below 1e-16.
int window_band(double sigma);

}  // namespace regulab
