#pragma once

#include <limits>
#include <string>
#include <vector>

#include "regulab/net_asymptotics.hpp"
#include "regulab/spectral_model.hpp"

namespace regulab {

/// F = 1 on [0,a], 0 beyond b, exp(-1/x) smoothstep in between.
/// With `strict` set, F = exp(-x^2 e^{-1/(x-a)}) beyond a: still 1 near 0, strictly decreasing past a.
struct PlateauFunction {
  double a = 1.0;
  double b = 2.0;
  bool strict = false;

  double operator()(double x) const;
};

PlateauFunction make_plateau(double a, double b, bool strict = false);

struct GradingConfig {
  int n_max = 4;
};

enum class UnitKind { SpectralMultiplier, EuclideanMollifier, HeisenbergMollifier, SchrodingerTransform, Pushforward, Custom };
const char* to_string(UnitKind k);

struct UnitNet {
  EpsilonGrid grid;
  std::vector<SmoothingOp> ops;
  UnitKind kind = UnitKind::Custom;
  std::string detail;

  const SpectralModel& model() const { return ops.front().model; }
};

UnitNet spectral_unit(const PlateauFunction& F, const EpsilonGrid& grid, const SpectralModel& model);
/// Spectral unit built from an arbitrary profile G(eps * lambda).
UnitNet profile_unit(const std::function<double(double)>& G, const EpsilonGrid& grid, const SpectralModel& model,
                     const std::string& detail);
UnitNet zero_unit(const EpsilonGrid& grid, const SpectralModel& model);

/// Nets ||T_eps v||_n for n = 0..n_max.
std::vector<ScalarNet> sobolev_nets(const UnitNet& unit, const SpectralFunction& v, int n_max);
/// Nets ||T_eps||_n (graded operator norm).
std::vector<ScalarNet> operator_nets(const UnitNet& unit, int n_max);

// ---- uniform-order signature shared by transfer-of-regularity and Reg checks ----

enum class Signature { Smooth, NonSmooth, Undetermined };
const char* to_string(Signature s);

struct SignatureThresholds {
  double regular_spread = 0.25;
  double singular_spread = 0.75;
  double tail_fraction = 0.5;
  /// Nets at or below this fraction of the reference nets count as zero.
  double amplitude_floor = 1e-4;
};

struct SignatureReport {
  std::vector<double> slopes;
  double spread = 0.0;
  Signature kind = Signature::Undetermined;
  bool below_floor = false;
};

SignatureReport order_signature(const std::vector<ScalarNet>& nets, const SignatureThresholds& th,
                                const std::vector<ScalarNet>* reference = nullptr);

// ---- Moderate approximate units ----

struct MauOptions {
  int minus_n0 = 3;                // item (b) is measured in ||.||_{-minus_n0}
  /// item (c): values below noise_floor * ||f||_n, or below 4 ulp of ||f||_0 weighted at the top frequency, are rounding
  double noise_floor = 1e-12;
  Thresholds thresholds{};
};

struct ItemBResult {
  std::string name;
  std::vector<double> values;
  bool pass = false;
};

struct ItemCResult {
  std::string name;
  std::vector<double> slopes;  // per n; +inf marks an exactly vanishing net
  bool exact_zero = false;
  bool pass = false;
};

struct ValidationReport {
  bool item_a = false;
  double item_a_order = 0.0;
  std::vector<double> item_a_slopes;
  bool item_b = false;
  std::vector<ItemBResult> b_results;
  bool item_c = false;
  std::vector<ItemCResult> c_results;

  bool pass() const { return item_a && item_b && item_c; }
  std::string first_failure() const;
};

struct NamedFunction {
  std::string name;
  SpectralFunction f;
};

ValidationReport validate_mau(const UnitNet& unit, const std::vector<NamedFunction>& dist_suite,
                              const std::vector<NamedFunction>& smooth_suite, const GradingConfig& grading,
                              const MauOptions& opt = {});

// ---- no propagation of support ----

struct LocalityOptions {
  int samples = 2048;            // kernel sample grid per axis (circle)
  double noise_floor = 1e-13;    // relative to the kernel peak at each eps
  Thresholds thresholds{};
};

struct LocalityReport {
  double delta = 0.0;
  ScalarNet remainder_sup;   // sup |N_eps|
  ScalarNet local_sup;       // sup |L_eps|
  Classification remainder_class;
  bool pass = false;
};

LocalityReport locality_decompose(const UnitNet& unit, double delta, const LocalityOptions& opt = {});

// ---- transfer of regularity and embedding ----

SignatureReport transfer_of_regularity_check(const UnitNet& unit, const SpectralFunction& u,
                                             const GradingConfig& grading, const SignatureThresholds& th = {});

FunctionNet embed_distribution(const SpectralFunction& u, const UnitNet& unit);

// ---- diffeomorphisms of the circle ----

/// chi(x) = x + shift + sum_k (a_k cos kx + b_k sin kx), k = 1..M.
struct CircleDiffeo {
  double shift = 0.0;
  std::vector<double> a;
  std::vector<double> b;

  double operator()(double x) const;
  double derivative(double x) const;
  bool is_rotation() const;
};

CircleDiffeo identity_diffeo();
CircleDiffeo rotation_diffeo(double alpha);
CircleDiffeo sine_diffeo(double amplitude);

/// Inverse as a truncated displacement series; throws non-invertible-diffeo if the
/// derivative is not positive or the round trip misses 1e-8.
CircleDiffeo invert(const CircleDiffeo& chi, int modes = 64);

/// Pullback f -> f o chi in the truncated basis (resampling on 8(2K+1) points, then projection).
SmoothingOp composition_operator(const CircleDiffeo& chi, const SpectralModel& model);

struct PushforwardResult {
  UnitNet unit;
  double aliasing = 0.0;  // || (C_chi C_chi^{-1} - I) (1+Delta)^{-1} ||_op
};

PushforwardResult pushforward_unit(const CircleDiffeo& chi, const UnitNet& unit);
/// || (C_chi C_{chi^{-1}} - I) (1+Delta)^{-s/2} ||_op
double aliasing_tolerance(const CircleDiffeo& chi, const SpectralModel& model, double s = 2.0);

}  // namespace regulab
