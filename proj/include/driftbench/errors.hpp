#pragma once

#include <stdexcept>
#include <string>

namespace driftbench {

// Every recoverable failure in the library throws Error with one of these
// codes. The CLI maps them to exit code 2; tests match on the code.
enum class Errc {
  dimension_mismatch,
  shape_mismatch,
  not_positive_definite,
  empty_input,
  insufficient_points,
  degenerate_design,
  out_of_range,
  parse_error,
  foreign_key,
  invalid_range,
  unknown_ap,
  unknown_rp,
  unknown_label,
  no_detections,
  too_few_samples,
  non_finite_feature,
  non_finite_loss,
  invalid_config,
  empty_database,
  empty_train_slice,
  ap_not_alive,
  io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace driftbench
