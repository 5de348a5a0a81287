#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "regulab/net_asymptotics.hpp"

namespace regulab {

/// C-infinity step built from exp(-1/x): 1 for t <= 0, 0 for t >= 1.
double smooth_transition(double t);

enum class Manifold { Circle, Torus2 };
const char* to_string(Manifold m);

/// Truncated Fourier model of S^1 (n = -K..K) or T^2 (lexicographic (m1,m2) in [-K,K]^2).
/// Basis: e^{i m.x} / (2 pi)^{d/2}.
struct SpectralModel {
  Manifold manifold = Manifold::Circle;
  int K = 0;

  int dim() const { return manifold == Manifold::Circle ? 1 : 2; }
  int side() const { return 2 * K + 1; }
  Eigen::Index size() const { return dim() == 1 ? side() : Eigen::Index(side()) * side(); }
  Eigen::Index index(int m1, int m2 = 0) const;
  bool contains(int m1, int m2 = 0) const;
  std::array<int, 2> freq(Eigen::Index i) const;
  double lambda(Eigen::Index i) const;
  Eigen::VectorXd lambdas() const;
  /// (1 + lambda)^s for every index.
  Eigen::VectorXd weights(double s) const;
  /// (2 pi)^{-d/2}
  double basis_scale() const;
  bool operator==(const SpectralModel& o) const { return manifold == o.manifold && K == o.K; }
};

SpectralModel circle_model(int K);
SpectralModel torus_model(int K);

struct SpectralFunction {
  SpectralModel model;
  Eigen::VectorXcd c;
};

struct SpectralDistribution : SpectralFunction {
  std::optional<double> declared_growth;
};

SpectralFunction zero_function(const SpectralModel& m);
SpectralFunction from_coefficients(const SpectralModel& m, const std::function<cplx(int, int)>& coeff);

double sobolev_norm(const SpectralFunction& f, double n);
/// max_m |c_m| (1+lambda_m)^{-s/2}; finite means the declared growth holds with that constant.
double growth_constant(const SpectralFunction& f, double s);

/// Restrict or zero-pad coefficients into another truncation of the same manifold.
SpectralFunction retruncate(const SpectralFunction& f, const SpectralModel& target);

/// Product by frequency convolution, evaluated exactly and truncated to `out`.
SpectralFunction multiply(const SpectralFunction& f, const SpectralFunction& g, const SpectralModel& out);
SpectralFunction multiply(const SpectralFunction& f, const SpectralFunction& g);

/// Samples on an N (or N x N) uniform grid x_j = 2 pi j / N. Requires N >= 2K+1.
Eigen::VectorXcd to_samples(const SpectralFunction& f, int N);
SpectralFunction from_samples(const SpectralModel& m, const Eigen::VectorXcd& samples, int N);
cplx evaluate(const SpectralFunction& f, double x1, double x2 = 0.0);

/// T in the Fourier basis; diagonal operators keep only their diagonal.
struct SmoothingOp {
  SpectralModel model;
  bool is_diagonal = true;
  Eigen::VectorXcd diag;
  Eigen::MatrixXcd dense;

  static SmoothingOp diagonal(const SpectralModel& m, Eigen::VectorXcd d);
  static SmoothingOp from_matrix(const SpectralModel& m, Eigen::MatrixXcd a);
  static SmoothingOp zero(const SpectralModel& m);
  static SmoothingOp identity(const SpectralModel& m);
  static SmoothingOp rank_one(const SpectralFunction& a, const SpectralFunction& b);

  Eigen::Index size() const { return model.size(); }
  Eigen::MatrixXcd matrix() const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  /// Entrywise |T_lm|^2.
  Eigen::MatrixXd abs2() const;
};

double weighted_hs_norm(const SmoothingOp& T, double p, double q);
std::vector<std::pair<double, double>> grading_pairs(double n);
double op_graded_norm(const SmoothingOp& T, double n);

/// Caches |T|^2 so many (p,q) weighted norms cost one matrix-vector product each.
class GradedNormCache {
 public:
  explicit GradedNormCache(const SmoothingOp& T);
  double weighted(double p, double q) const;
  double graded(double n) const;

 private:
  SpectralModel model_;
  bool diagonal_;
  Eigen::VectorXd d2_;
  Eigen::MatrixXd a2_;
  Eigen::VectorXd log1p_lambda_;
};

SpectralFunction apply_op(const SmoothingOp& T, const SpectralFunction& u);
cplx op_trace(const SmoothingOp& T);
SmoothingOp adjoint(const SmoothingOp& T);
SmoothingOp compose(const SmoothingOp& A, const SmoothingOp& B);

/// Diagonal Fourier multiplier of order m with its characteristic set.
struct Multiplier {
  SmoothingOp op;
  double order = 0.0;
  /// Direction arcs (radians) on which the symbol is elliptic; char(P) is the complement.
  std::vector<std::pair<double, double>> elliptic_arcs;
  bool in_char(double theta) const;
};

Multiplier multiplier_psido(const SpectralModel& m, const std::function<cplx(int, int)>& symbol, double order,
                            double bound_constant = 1.0,
                            std::vector<std::pair<double, double>> elliptic_arcs = {});
/// Order-0 cone cutoff: 1 within `core` of `center`, 0 beyond core + transition, 0 at frequency 0.
Multiplier cone_cutoff(const SpectralModel& m, double center, double core, double transition);
/// (1+Delta)^{s/2}
Multiplier bessel_potential(const SpectralModel& m, double s);

SmoothingOp mult_operator(const SpectralFunction& f);
SmoothingOp compose_with_psido(const SmoothingOp& T, const SmoothingOp& P);

/// Product T(u_0) ... T(u_r).
SpectralFunction tensor_evaluator(const std::vector<SpectralFunction>& us, const SmoothingOp& T);

/// Multiplies each phi(T_eps) by poly(Tr T_eps).
FunctionNet trace_action(const std::vector<cplx>& poly, const FunctionNet& phi_eval,
                         const std::vector<cplx>& unit_traces);

}  // namespace regulab
