#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "tlopt/lights.hpp"

namespace tlopt::lights {

class ProgrammeFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"cycle_ticks", "t_min", "yellow_ticks", "red_yellow_ticks", "repair_gap",
///  "windows": [{"track", "start", "green"}, ...]} in that key order, one
/// window per line, trailing newline.
std::string programme_to_json(const LightsProgramme& programme);

/// Throws ProgrammeFormatError on malformed JSON, missing or non-integer
/// fields, or unknown keys. Structural checks against a network are left to
/// validate_programme.
LightsProgramme programme_from_json(std::string_view text);

}  // namespace tlopt::lights
