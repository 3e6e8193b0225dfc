#pragma once

#include <string>
#include <string_view>

#include "calim/calibrators.hpp"

namespace calim {

inline constexpr int kMapFormatVersion = 1;

/// Versioned JSON document {version, method, K, params}. Floats are written
/// in shortest round-trip form, so parse_map(serialize_map(m)) == m exactly.
std::string serialize_map(const CalibrationMap& map);

/// Throws Error(ParseError) on malformed documents or violated invariants.
CalibrationMap parse_map(std::string_view text);

}  // namespace calim
