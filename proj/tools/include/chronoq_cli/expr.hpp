#pragma once

#include <string_view>

namespace chronoq::cli {

/// Evaluate a phase literal such as "pi/2", "-3*pi/4" or "0.25". Only
/// numbers, `pi`, `*`, `/` and `-` are accepted. Throws UsageError.
double parse_phase(std::string_view text);

}  // namespace chronoq::cli
