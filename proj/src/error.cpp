#include "regulab/error.hpp"

namespace regulab {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::parameter_out_of_range: return "parameter-out-of-range";
    case Errc::count_too_small: return "count-too-small";
    case Errc::eps0_out_of_range: return "eps0-out-of-range";
    case Errc::mismatched_grids: return "mismatched-grids";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::empty_input: return "empty-input";
    case Errc::too_few_points: return "too-few-points";
    case Errc::model_mismatch: return "model-mismatch";
    case Errc::growth_bound_violation: return "growth-bound-violation";
    case Errc::delta_out_of_range: return "delta-out-of-range";
    case Errc::non_invertible_diffeo: return "non-invertible-diffeo";
    case Errc::under_resolved_grid: return "under-resolved-grid";
    case Errc::support_overflow: return "support-overflow";
    case Errc::resolution_floor: return "resolution-floor";
    case Errc::unresolvable_cutoff: return "unresolvable-cutoff";
    case Errc::not_moderate: return "not-moderate";
    case Errc::non_finite: return "non-finite";
    case Errc::io: return "io";
    case Errc::parse: return "parse";
  }
  return "unknown";
}

}  // namespace regulab
