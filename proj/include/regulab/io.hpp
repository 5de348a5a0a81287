#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "regulab/approximate_units.hpp"
#include "regulab/euclid.hpp"
#include "regulab/heisenberg.hpp"
#include "regulab/net_asymptotics.hpp"
#include "regulab/regularity.hpp"
#include "regulab/spectral_model.hpp"

namespace regulab {

using json = nlohmann::ordered_json;

// ---- report serialization ----

void to_json(json& j, const EpsilonGrid& g);
void from_json(const json& j, EpsilonGrid& g);
void to_json(json& j, const SpectralModel& m);
void from_json(const json& j, SpectralModel& m);
void to_json(json& j, const OrderEstimate& e);
void to_json(json& j, const Classification& c);
void to_json(json& j, const SignatureReport& r);
void to_json(json& j, const ValidationReport& r);
void to_json(json& j, const LocalityReport& r);
void to_json(json& j, const SobolevEstimate& s);
void to_json(json& j, const TamenessEstimate& t);
void to_json(json& j, const PtBoundReport& r);
void to_json(json& j, const RegSignature& r);
void to_json(json& j, const SingularSupportReport& r);
void to_json(json& j, const WavefrontReport& r);
void to_json(json& j, const PsidoShiftReport& r);
void to_json(json& j, const EquivarianceReport& r);
void to_json(json& j, const HeisConvergence& r);
void to_json(json& j, const SchrodingerUnitReport& r);
void to_json(json& j, const DistComparison& r);
void to_json(json& j, const HPoint& p);

/// {manifold, K, coeffs: [[re, im], ...]}
void to_json(json& j, const SpectralFunction& f);
void from_json(const json& j, SpectralFunction& f);

/// Non-finite doubles become the strings "inf", "-inf", "nan".
json number(double v);

void write_json(const std::filesystem::path& p, const json& j);
json read_json(const std::filesystem::path& p);

// ---- nets as CSV: epsilon,seminorm_id,value ----

struct NamedNet {
  std::string id;
  ScalarNet net;
};

void write_nets_csv(std::ostream& os, const std::vector<NamedNet>& nets);
void write_nets_csv(const std::filesystem::path& p, const std::vector<NamedNet>& nets);
/// Rows grouped by seminorm_id in first-seen order; each group must be a geometric grid with >= 2 points.
std::vector<NamedNet> read_nets_csv(std::istream& is);
std::vector<NamedNet> read_nets_csv(const std::filesystem::path& p);
/// Recovers (eps0, ratio, count) from decreasing geometric samples; throws parse on a non-geometric list.
EpsilonGrid infer_grid(const std::vector<double>& eps, double rel_tol = 1e-9);

// ---- operators and units ----

/// Binary operator blob: "RLOP", int32 manifold, int32 K, int32 diagonal, int64 n,
/// then n (diagonal) or n*n (dense, row-major) complex doubles as (re, im) pairs.
void write_operator(std::ostream& os, const SmoothingOp& T);
SmoothingOp read_operator(std::istream& is);

/// Directory holding unit.json (provenance, grid, model, blob names) and op_XXX.bin per eps.
void write_unit(const std::filesystem::path& dir, const UnitNet& unit);
UnitNet read_unit(const std::filesystem::path& dir);

// ---- sampled fields ----

/// Binary: "RLSF", int32 dims, then per axis (int64 n, double lo, double step), then row-major doubles.
struct FieldFile {
  std::vector<LineGrid> axes;
  std::vector<double> values;
};

void write_field(const std::filesystem::path& p, const FieldFile& f);
FieldFile read_field(const std::filesystem::path& p);
FieldFile to_field_file(const SampledField& f);
SampledField to_sampled_field(const FieldFile& f);

// ---- experiment configuration ----

struct HeisenbergSettings {
  int hermite_order = 4;
  double step = 0.25;
  int half = 32;
  EpsilonGrid grid = make_eps_grid(0.5, 0.7742636826811269, 10);
  double min_slope = 3.5;
};

struct StftSettings {
  double T = 5.0, dt = 1.0 / 32, X = 5.0, dx = 1.0 / 8, dxi = 1.0 / 16, tau_max = 4.0, dtau = 1.0 / 8;
};

struct ExperimentConfig {
  SpectralModel model = circle_model(256);
  EpsilonGrid grid = default_eps_grid();
  PlateauFunction plateau{};
  std::string fixture = "delta";
  std::vector<std::string> suite;   // empty selects the whole circle suite
  Thresholds thresholds{};
  SignatureThresholds signature{};
  GradingConfig grading{};
  TamenessOptions tameness{};
  int n_random = 200;
  std::uint64_t seed = 1;
  std::string output = "out";
  int windows = 8;
  double sigma = 0.1;
  int bins = 16;
  HeisenbergSettings heisenberg{};
  StftSettings stft{};
};

/// Parses and validates; unknown keys and out-of-range values throw Errc::parse.
ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::filesystem::path& p);
json config_to_json(const ExperimentConfig& c);

}  // namespace regulab
