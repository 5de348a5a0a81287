#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "regulab/approximate_units.hpp"
#include "regulab/spectral_model.hpp"

namespace regulab {

// ---- Sobolev order from dyadic shells ----

struct SobolevEstimate {
  double order = 0.0;               // +inf for band-limited input
  std::vector<double> shell_L;      // representative |m| per shell
  std::vector<double> shell_energy; // sum |c_m|^2 over the shell
  OrderEstimate fit;                // log energy vs log L
};

/// Fits E_j ~ L_j^{-2s} over complete dyadic shells 2^j <= |m| < 2^{j+1}, j >= 1, and returns s.
SobolevEstimate sobolev_order_estimate(const SpectralFunction& u);

// ---- evaluators T -> phi(T) ----

class DistributionEvaluator {
 public:
  enum class Kind { FromDistribution, Tensor, TraceScaled, PsiDOShifted, ModuleAction, Zero };

  static DistributionEvaluator from_distribution(SpectralFunction u);
  static DistributionEvaluator tensor(std::vector<SpectralFunction> us);
  static DistributionEvaluator trace_scaled(std::vector<cplx> poly, DistributionEvaluator base);
  /// (P phi)(T) = phi(T P)
  static DistributionEvaluator psido_shifted(SmoothingOp P, DistributionEvaluator base);
  /// (M_f phi)(T) = phi(T M_f)
  static DistributionEvaluator module_action(SpectralFunction f, DistributionEvaluator base);
  static DistributionEvaluator zero(const SpectralModel& m);

  Kind kind() const { return kind_; }
  const SpectralModel& model() const { return model_; }
  SpectralFunction operator()(const SmoothingOp& T) const;

  /// When phi = Theta_v for a single distribution v (linear kinds), returns v.
  const std::optional<SpectralFunction>& as_distribution() const { return linear_; }
  bool is_linear() const { return as_distribution().has_value(); }
  std::string describe() const;

 private:
  Kind kind_ = Kind::Zero;
  SpectralModel model_;
  std::vector<SpectralFunction> us_;
  std::vector<cplx> poly_;
  std::optional<SmoothingOp> P_;
  std::shared_ptr<const DistributionEvaluator> base_;
  std::optional<SpectralFunction> linear_;

  std::optional<SpectralFunction> compute_linear() const;
  DistributionEvaluator&& finalize() &&;
};

// ---- operator test family ----

struct FamilyMember {
  SmoothingOp T;
  std::string sequence;   // empty for members outside every sequence
  double L = 0.0;         // frequency scale along the sequence
  // rank-one members keep their factors so weighted norms factor exactly
  std::optional<SpectralFunction> a, b;
};

struct OperatorFamily {
  SpectralModel model;
  std::vector<FamilyMember> members;

  std::vector<std::string> sequences() const;
};

struct FamilyOptions {
  int n_random = 200;
  double row_decay = 2.0;          // rows scaled by (1+lambda)^{-row_decay}
  PlateauFunction plateau{};
  EpsilonGrid unit_grid = default_eps_grid();
  std::uint64_t seed = 1;
};

/// Scaled spectral units, rank-one extremizers phi_L (x) shell(L) for L = 2, 4, ..., K/2 (flat shells of
/// both signs, plus shells of conj(probe) when given), and random matrices with decaying rows.
OperatorFamily make_test_family(const SpectralModel& m, const FamilyOptions& opt = {},
                                const std::optional<SpectralFunction>& probe = std::nullopt);

/// Random Gaussian-entry operators with rows scaled by (1+lambda)^{-decay}.
std::vector<SmoothingOp> random_operators(const SpectralModel& m, int count, double decay, std::uint64_t seed);

// ---- polynomial tameness ----

struct TamenessOptions {
  int n_max = 4;
  int b = 0;
  double growth_tolerance = 0.25;  // max log-log slope of the ratio along a sequence
  int k_max = 4;
};

struct TamenessEstimate {
  bool determined = false;
  double degree = 0.0;                  // least bounded half-integer r
  int k = 1;
  int b = 0;
  bool uniform_over_r = false;          // bounded for every r searched
  std::map<int, double> C;              // n -> max ratio over the family at r = degree
  std::map<int, double> residuals;      // n -> worst growth slope at r = degree
  std::vector<std::pair<double, double>> worst_growth;  // (r, worst slope) for every r searched at this k
};

TamenessEstimate tameness_fit(const DistributionEvaluator& phi, const OperatorFamily& family,
                              const TamenessOptions& opt = {});

struct PtBoundReport {
  int checked = 0;
  int violations = 0;
  int middle_violations = 0;      // middle factor exceeding ||T||_{n-k}
  double worst_ratio = 0.0;       // max lhs / rhs
  double min_slack = 0.0;         // min (rhs - lhs) / rhs
};

/// ||T u||_n <= ||(1+Delta)^{n/2} T (1+Delta)^{-k/2}||_HS ||u||_k for every T, with relative slack rel_tol.
PtBoundReport verify_pt_bound(const SpectralFunction& u, double k, const std::vector<SmoothingOp>& ops, double n,
                              double rel_tol = 1e-9);

// ---- Reg signature ----

enum class RegClass { Regular, NonRegular, Undetermined };
const char* to_string(RegClass c);

struct RegSignature {
  RegClass kind = RegClass::Undetermined;
  SignatureReport detail;
  std::vector<ScalarNet> nets;   // ||phi(T_eps)||_n, n = 0..n_max
};

RegSignature regular_signature(const DistributionEvaluator& phi, const UnitNet& unit, const GradingConfig& grading,
                               const SignatureThresholds& th = {}, const std::vector<ScalarNet>* reference = nullptr);

/// Nets ||phi(T_eps)||_n, n = 0..n_max.
std::vector<ScalarNet> evaluator_nets(const DistributionEvaluator& phi, const UnitNet& unit, int n_max);

// ---- singular support ----

struct WindowFlag {
  RegClass singular = RegClass::Undetermined;  // NonRegular means the window meets sing supp
  bool in_support = false;
  double spread = 0.0;
  bool below_floor = false;
};

struct SingularSupportReport {
  std::vector<WindowFlag> windows;
  std::vector<int> singular_windows() const;
  std::vector<int> support_windows() const;
};

/// u may be truncated wider than the unit so products with the cutoffs are exact in the unit's band.
SingularSupportReport singular_support_map(const SpectralFunction& u, const UnitNet& unit,
                                           const std::vector<SpectralFunction>& windows, const GradingConfig& grading,
                                           const SignatureThresholds& th = {});

/// Gaussian windows of width sigma centered at 2 pi j / count (circle).
std::vector<SpectralFunction> circle_windows(const SpectralModel& m, int count, double sigma);

// ---- wavefront on the torus ----

struct WavefrontOptions {
  int windows_per_axis = 8;
  double sigma = 0.25;
  int bins = 16;
  GradingConfig grading{};
  SignatureThresholds thresholds{};
};

struct WavefrontReport {
  std::vector<std::array<double, 2>> window_centers;
  std::vector<double> bin_centers;
  double bin_core = 0.0, bin_transition = 0.0;
  /// flags[w][b]
  std::vector<std::vector<RegClass>> flags;
  std::vector<std::vector<std::vector<double>>> slopes;
  std::vector<std::vector<double>> spreads;

  /// (window, bin) pairs flagged NonRegular.
  std::vector<std::pair<int, int>> singular() const;
  std::vector<std::pair<int, int>> undetermined() const;
};

/// u on a torus truncation at least as wide as the unit's.
WavefrontReport wavefront_estimate(const SpectralFunction& u, const UnitNet& unit, const WavefrontOptions& opt = {});

/// Default torus grid for wavefront work: eps_j = 0.5 * 2^{-j/2}, 21 points.
EpsilonGrid torus_eps_grid();

// ---- order shift under multipliers ----

struct PsidoShiftReport {
  TamenessEstimate base, shifted;
  double order = 0.0;
  double shift = 0.0;
  bool pass = false;
};

PsidoShiftReport psido_shift_check(const Multiplier& P, const DistributionEvaluator& phi, const OperatorFamily& family,
                                   const TamenessOptions& opt = {}, double tolerance = 0.5);

/// max over ops of ||(P Theta_u)(T) - Theta_{Pu}(T)||_0 / ||Theta_{Pu}(T)||_0.
double psido_equivariance_defect(const SmoothingOp& P, const SpectralFunction& u, const std::vector<SmoothingOp>& ops);

// ---- diffeomorphism equivariance ----

struct EquivarianceReport {
  double max_abs = 0.0;        // max ||chi.Theta_u(T) - Theta_{chi* u}(T)||_0
  double max_rel = 0.0;        // same divided by ||T chi* u||_2
  double aliasing = 0.0;       // tolerance for the relative defect
  bool rotation = false;
  bool pass = false;
};

/// (chi.phi)(T) = C_chi phi(C_chi^{-1} T C_chi) against Theta_{u o chi}(T) = T C_chi u.
EquivarianceReport diffeo_equivariance(const CircleDiffeo& chi, const SpectralFunction& u,
                                       const std::vector<SmoothingOp>& ops, double rotation_tol = 1e-9);

}  // namespace regulab
