#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "calim/binning.hpp"

namespace calim {

/// Diagram document for one reliability table:
/// {mode, class?, M, scheme, bins: [{lower, upper, count, weight, accuracy?, confidence?}], n, ece, mce}.
/// `class` is 1-based and present only in classwise mode; accuracy and
/// confidence are omitted for empty bins.
nlohmann::json diagram_to_json(const ReliabilityTable& table);

/// Paired confidence/accuracy bars per bin, the identity diagonal and a bin
/// weight strip below each panel. One panel per table, laid out in a grid.
std::string render_svg(std::span<const ReliabilityTable> tables);

}  // namespace calim
