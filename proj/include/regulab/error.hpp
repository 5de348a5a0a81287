#pragma once

#include <stdexcept>
#include <string>

namespace regulab {

enum class Errc {
  parameter_out_of_range,
  count_too_small,
  eps0_out_of_range,
  mismatched_grids,
  dimension_mismatch,
  empty_input,
  too_few_points,
  model_mismatch,
  growth_bound_violation,
  delta_out_of_range,
  non_invertible_diffeo,
  under_resolved_grid,
  support_overflow,
  resolution_floor,
  unresolvable_cutoff,
  not_moderate,
  non_finite,
  io,
  parse,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

}  // namespace regulab
