#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace regulab {

using cplx = std::complex<double>;

/// Geometric grid eps_j = eps0 * ratio^j, j = 0..count-1.
struct EpsilonGrid {
  double eps0 = 0.5;
  double ratio = 0.7071067811865476;
  int count = 24;

  double at(int j) const;
  std::vector<double> points() const;
  bool operator==(const EpsilonGrid& o) const {
    return eps0 == o.eps0 && ratio == o.ratio && count == o.count;
  }
};

EpsilonGrid make_eps_grid(double eps0, double ratio, int count);
EpsilonGrid default_eps_grid();

/// Replacement for exact zeros in log-log fits.
inline constexpr double kValueFloor = 1e-300;

struct ScalarNet {
  EpsilonGrid grid;
  std::vector<double> values;
};

ScalarNet make_scalar_net(const EpsilonGrid& grid, std::vector<double> values);
ScalarNet sample_net(const EpsilonGrid& grid, const std::function<double(double)>& f);

/// Zero out entries at or below `floor`. Used to discard rounding plateaus.
ScalarNet clamp_below(ScalarNet net, double floor);

struct OrderEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  int first = 0;  // inclusive window
  int last = 0;   // inclusive window
  int floored = 0;
  bool identically_zero = false;
};

OrderEstimate estimate_order(const ScalarNet& net, double tail_fraction = 0.5);

enum class NetClass { Moderate, Negligible, Undetermined };
const char* to_string(NetClass c);

struct Thresholds {
  double negligible_slope = 10.0;
  double min_r_squared = 0.9;
  double tail_fraction = 0.5;
};

struct Classification {
  NetClass kind = NetClass::Undetermined;
  double order = 0.0;  // worst N with value ~ eps^{-N}
  std::map<std::string, OrderEstimate> fits;
};

bool is_negligible_fit(const OrderEstimate& e, const Thresholds& th);
Classification classify_net(const std::map<std::string, ScalarNet>& nets,
                            const Thresholds& th = {});
Classification classify_net(const ScalarNet& net, const Thresholds& th = {});

/// Representative of an element of the ring of generalized numbers.
struct GeneralizedScalar {
  EpsilonGrid grid;
  std::vector<cplx> values;

  ScalarNet magnitude() const;
};

GeneralizedScalar make_gen_scalar(const EpsilonGrid& grid, const std::function<cplx(double)>& f);
GeneralizedScalar gen_scalar_add(const GeneralizedScalar& a, const GeneralizedScalar& b,
                                 const Thresholds& th = {});
GeneralizedScalar gen_scalar_mul(const GeneralizedScalar& a, const GeneralizedScalar& b,
                                 const Thresholds& th = {});

/// Slope of |a - b|; +inf when the difference vanishes identically.
double sharp_valuation(const GeneralizedScalar& a, const GeneralizedScalar& b,
                       double tail_fraction = 0.5);

/// eps -> vector net, e.g. spectral coefficients of T_eps u.
struct FunctionNet {
  EpsilonGrid grid;
  std::vector<Eigen::VectorXcd> values;
};

FunctionNet pushforward_net(const Eigen::MatrixXcd& map, const FunctionNet& net);
ScalarNet norm_net(const FunctionNet& net, const std::function<double(const Eigen::VectorXcd&)>& norm);

}  // namespace regulab
