#pragma once

#include <stdexcept>
#include <string>

namespace wcm {

// Every failure mode the library can signal. Codes are stable so callers
// (and the CLI exit-code mapping) can dispatch on them.
enum class Errc {
  negative_weight,
  zero_total_mass,
  length_mismatch,
  non_finite_weight,
  alphabet_mismatch,
  weight_out_of_range,
  unknown_model,
  negative_loss,
  infeasible_temperature,
  non_positive_beta,
  gamma_infeasible,
  constant_loss_nonzero_gamma,
  non_convergence,
  degenerate_beta,
  not_abs_continuous,
  infinite_loss,
  enumeration_cap_exceeded,
  non_positive_lambda,
  infinite_lautum,
  bad_input,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace wcm
