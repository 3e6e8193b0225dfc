#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "calim/calibrators.hpp"
#include "calim/metrics.hpp"

namespace calim {

enum class Method { Uncalibrated, Histogram, Isotonic, Temperature, Vector, VectorBias, MatrixBias };

std::string method_key(Method method);    // "before", "histogram", ..., "matrix-bias"
std::string method_title(Method method);  // "Before calibration", "Hist-binning", ..., "M-scaling-b"
Method parse_method(const std::string& key);

// All seven columns in table order.
const std::vector<Method>& all_methods();

struct FittedMethod {
    CalibrationMap map;
    std::optional<FitReport> report;  // linear methods only
};

/// Fits one calibration method on `calib`. `histogram` configures
/// histogram binning and is ignored otherwise. Throws InvalidConfig for
/// Method::Uncalibrated.
FittedMethod fit_method(Method method, const PredictionSet& calib,
                        const BinningConfig& histogram = {kDefaultHistogramBins, BinScheme::EqualWidth});

struct ComparisonOptions {
    std::vector<Method> methods = all_methods();
    BinningConfig metrics{kDefaultMetricBins, BinScheme::EqualWidth};
    BinningConfig histogram{kDefaultHistogramBins, BinScheme::EqualWidth};
};

struct ComparisonColumn {
    Method method = Method::Uncalibrated;
    MetricsReport metrics;
    std::optional<FitReport> fit;
};

struct Comparison {
    std::vector<ComparisonColumn> columns;
    BinningConfig metrics;
};

/// Fits every method on `calib` and evaluates it on `test`.
Comparison compare_methods(const PredictionSet& calib, const PredictionSet& test, const ComparisonOptions& options = {});

// Metric keys in display order.
const std::vector<std::string>& metric_keys();

std::string format_metrics(const MetricsReport& report);
nlohmann::json metrics_to_json(const MetricsReport& report);

/// One row per metric, one column per method; the best value in each row
/// (highest accuracy, lowest otherwise) is marked with '*'.
std::string format_comparison(const Comparison& comparison);
nlohmann::json comparison_to_json(const Comparison& comparison);

}  // namespace calim
