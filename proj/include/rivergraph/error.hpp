#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rivergraph {

enum class Errc {
  invalid_argument,
  cycle_detected,
  duplicate_edge,
  duplicate_node,
  nonpositive_length,
  unknown_station,
  singular_degree,
  different_components,
  mu_out_of_range,
  isolated_row,
  degenerate_sigma,
  shape_mismatch,
  nonfinite_loss,
  constant_observed,
  parse_error,
  io_error,
};

std::string_view errc_name(Errc code) noexcept;

// Every failure in the library surfaces as this exception; code() tells the
// caller which contract was broken without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rivergraph
