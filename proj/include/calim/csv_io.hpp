#pragma once

#include <iosfwd>
#include <string>

#include "calim/data_model.hpp"

namespace calim {

/// Predictions CSV: header `logit_0..logit_{K-1}` and/or `prob_0..prob_{K-1}`,
/// then `label` holding the 1-based class. Labels become 0-based on read and
/// 1-based again on write. Parse failures throw Error(ParseError) naming the
/// data row and column.
PredictionSet read_predictions_csv(std::istream& in);
PredictionSet read_predictions_file(const std::string& path);

enum class ColumnFamily { Logits, Probs, Both };

// Logits when present, probabilities otherwise.
ColumnFamily natural_columns(const PredictionSet& ps);

/// Floats are written with 17 significant digits.
void write_predictions_csv(std::ostream& out, const PredictionSet& ps, ColumnFamily columns);
void write_predictions_file(const std::string& path, const PredictionSet& ps, ColumnFamily columns);

}  // namespace calim
