#pragma once

#include <cstddef>

#include "calim/binning.hpp"
#include "calim/data_model.hpp"

namespace calim {

// Protocol defaults for evaluation.
inline constexpr std::size_t kDefaultMetricBins = 15;
inline constexpr std::size_t kDefaultHistogramBins = 20;
inline constexpr std::size_t kDefaultDiagramBins = 10;

// Lower clamp applied to probabilities before taking a log.
inline constexpr double kLogClamp = 1e-12;

double accuracy(const PredictionSet& ps);

// Weighted mean of per-bin |accuracy - confidence|; empty bins add nothing.
double ece(const ReliabilityTable& table);

// Largest per-bin gap over nonempty bins. Throws AllBinsEmpty.
double mce(const ReliabilityTable& table);

// Classwise ECE averaged over K one-vs-rest tables sharing `edges`.
double cwece(const PredictionSet& ps, const BinEdges& edges);

// Classwise ECE where each class gets its own edges (relevant for
// equal-frequency binning, whose edges depend on the class column).
double cwece(const PredictionSet& ps, const BinningConfig& config);

double nll(const PredictionSet& ps);
double brier(const PredictionSet& ps);

MetricsReport report(const PredictionSet& ps, const BinningConfig& config = {kDefaultMetricBins, BinScheme::EqualWidth});

}  // namespace calim
