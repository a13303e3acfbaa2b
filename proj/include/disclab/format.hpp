#pragma once

#include <string>
#include <string_view>

namespace disclab {

/// Locale-independent shortest round-trip decimal with at most 17
/// significant digits.
std::string format_real(double x);

/// Strict parse of a full token; throws Error{io_error} on garbage.
double parse_real(std::string_view token);

}  // namespace disclab
