#include "calim/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "calim/error.hpp"

namespace calim {

std::string method_key(Method method) {
    switch (method) {
        case Method::Uncalibrated: return "before";
        case Method::Histogram: return "histogram";
        case Method::Isotonic: return "isotonic";
        case Method::Temperature: return "temperature";
        case Method::Vector: return "vector";
        case Method::VectorBias: return "vector-bias";
        case Method::MatrixBias: return "matrix-bias";
    }
    return "unknown";
}

std::string method_title(Method method) {
    switch (method) {
        case Method::Uncalibrated: return "Before calibration";
        case Method::Histogram: return "Hist-binning";
        case Method::Isotonic: return "Isotonic";
        case Method::Temperature: return "T-scaling";
        case Method::Vector: return "V-scaling";
        case Method::VectorBias: return "V-scaling-b";
        case Method::MatrixBias: return "M-scaling-b";
    }
    return "unknown";
}

Method parse_method(const std::string& key) {
    for (Method m : all_methods()) {
        if (method_key(m) == key) return m;
    }
    throw Error(ErrorCode::ParseError, "unknown method '" + key + "'");
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods{Method::Uncalibrated, Method::Histogram, Method::Isotonic,
                                             Method::Temperature, Method::Vector, Method::VectorBias,
                                             Method::MatrixBias};
    return methods;
}

FittedMethod fit_method(Method method, const PredictionSet& calib, const BinningConfig& histogram) {
    switch (method) {
        case Method::Uncalibrated:
            throw Error(ErrorCode::InvalidConfig, "'before' is not a calibration method");
        case Method::Histogram:
            return {fit_histogram_binning(calib, histogram), std::nullopt};
        case Method::Isotonic:
            return {fit_isotonic(calib), std::nullopt};
        case Method::Temperature:
        case Method::Vector:
        case Method::VectorBias:
        case Method::MatrixBias: {
            auto [map, report] = fit_linear_scaling(calib, parse_linear_mode(method_key(method)));
            return {std::move(map), std::move(report)};
        }
    }
    throw Error(ErrorCode::InvalidConfig, "unknown method");
}

Comparison compare_methods(const PredictionSet& calib, const PredictionSet& test, const ComparisonOptions& options) {
    if (calib.num_classes() != test.num_classes()) {
        throw Error(ErrorCode::ClassCountMismatch, "calibration set has " + std::to_string(calib.num_classes()) +
                                                       " classes, test set has " +
                                                       std::to_string(test.num_classes()));
    }
    Comparison out;
    out.metrics = options.metrics;
    for (Method method : options.methods) {
        ComparisonColumn column;
        column.method = method;
        if (method == Method::Uncalibrated) {
            column.metrics = report(test, options.metrics);
        } else {
            FittedMethod fitted = fit_method(method, calib, options.histogram);
            column.metrics = report(apply_map(fitted.map, test), options.metrics);
            column.fit = std::move(fitted.report);
        }
        out.columns.push_back(std::move(column));
    }
    return out;
}

const std::vector<std::string>& metric_keys() {
    static const std::vector<std::string> keys{"accuracy", "ece", "mce", "cwece", "nll", "brier"};
    return keys;
}

namespace {

std::string metric_label(const std::string& key) {
    if (key == "accuracy") return "Accuracy, %";
    if (key == "ece") return "ECE, %";
    if (key == "mce") return "MCE, %";
    if (key == "cwece") return "cwECE, %";
    if (key == "nll") return "NLL";
    return "Brier";
}

bool is_percent(const std::string& key) { return key != "nll" && key != "brier"; }

std::string format_value(const std::string& key, double v) {
    char buf[32];
    if (is_percent(key)) {
        std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
    } else {
        std::snprintf(buf, sizeof buf, "%.4f", v);
    }
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string format_metrics(const MetricsReport& report) {
    std::ostringstream out;
    out << "bins: " << report.bins << " (" << to_string(report.scheme) << ")\n";
    for (const auto& key : metric_keys()) {
        std::string label = metric_label(key);
        out << label << std::string(14 - std::min<std::size_t>(label.size(), 13), ' ')
            << format_value(key, report.at(key)) << "\n";
    }
    return out.str();
}

nlohmann::json metrics_to_json(const MetricsReport& report) {
    nlohmann::json doc;
    doc["bins"] = report.bins;
    doc["scheme"] = to_string(report.scheme);
    for (const auto& key : metric_keys()) doc[key] = report.at(key);
    return doc;
}

std::string format_comparison(const Comparison& comparison) {
    std::size_t width = 10;
    for (const auto& c : comparison.columns) width = std::max(width, method_title(c.method).size() + 2);

    std::ostringstream out;
    out << "metrics on " << comparison.metrics.bins << " " << to_string(comparison.metrics.scheme)
        << " bins; * marks the best value per row\n";
    out << std::string(14, ' ');
    for (const auto& c : comparison.columns) out << pad(method_title(c.method), width + 1);
    out << "\n";
    for (const auto& key : metric_keys()) {
        const bool higher_better = key == "accuracy";
        double best = comparison.columns.empty() ? 0.0 : comparison.columns.front().metrics.at(key);
        for (const auto& c : comparison.columns) {
            const double v = c.metrics.at(key);
            best = higher_better ? std::max(best, v) : std::min(best, v);
        }
        const std::string label = metric_label(key);
        out << label << std::string(14 - std::min<std::size_t>(label.size(), 13), ' ');
        for (const auto& c : comparison.columns) {
            const double v = c.metrics.at(key);
            out << pad(format_value(key, v), width) << (v == best ? "*" : " ");
        }
        out << "\n";
    }
    return out.str();
}

nlohmann::json comparison_to_json(const Comparison& comparison) {
    nlohmann::json doc;
    doc["bins"] = comparison.metrics.bins;
    doc["scheme"] = to_string(comparison.metrics.scheme);
    nlohmann::json columns = nlohmann::json::array();
    for (const auto& c : comparison.columns) {
        nlohmann::json col;
        col["method"] = method_key(c.method);
        col["title"] = method_title(c.method);
        nlohmann::json metrics;
        for (const auto& key : metric_keys()) metrics[key] = c.metrics.at(key);
        col["metrics"] = std::move(metrics);
        if (c.fit) {
            col["fit"] = {{"initial_nll", c.fit->initial_nll},
                          {"final_nll", c.fit->final_nll},
                          {"iterations", c.fit->iterations},
                          {"converged", c.fit->converged}};
        }
        columns.push_back(std::move(col));
    }
    doc["columns"] = std::move(columns);
    return doc;
}

}  // namespace calim
