#pragma once

#include <string>
#include <string_view>

namespace qbound {

/// Locale-independent decimal rendering with `significant` significant digits
/// (printf %g style, '.' separator). Non-finite values render as nan/inf/-inf.
std::string format_number(double value, int significant = 12);

/// Shortest representation that parses back to exactly `value`.
std::string format_roundtrip(double value);

/// Locale-independent parse of a whole string; throws ConstructionError on junk.
double parse_number(std::string_view text);

}  // namespace qbound
