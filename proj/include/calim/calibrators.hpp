#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "calim/binning.hpp"
#include "calim/data_model.hpp"
#include "calim/matrix.hpp"
#include "calim/metrics.hpp"

namespace calim {

/// One-vs-rest histogram binning: a piecewise-constant map per class.
struct HistogramMap {
    std::vector<BinEdges> edges;             // per class
    std::vector<std::vector<double>> theta;  // per class, one value per bin

    [[nodiscard]] std::size_t num_classes() const noexcept { return edges.size(); }
    [[nodiscard]] double evaluate(std::size_t j, double p) const;
};

/// One-vs-rest isotonic regression: a nondecreasing step function per class.
/// Step m covers [breakpoints[m], breakpoints[m+1]), the last step is closed.
struct IsotonicMap {
    std::vector<std::vector<double>> breakpoints;  // per class, 0 = a_0 < ... < a_M = 1
    std::vector<std::vector<double>> levels;       // per class, M nondecreasing values

    [[nodiscard]] std::size_t num_classes() const noexcept { return levels.size(); }
    [[nodiscard]] double evaluate(std::size_t j, double p) const;
};

enum class LinearMode { Temperature, Vector, VectorBias, MatrixBias };

std::string to_string(LinearMode mode);
LinearMode parse_linear_mode(const std::string& text);

/// softmax(W z + b) with W a scalar 1/T, a diagonal or a full matrix.
struct LinearLogitMap {
    LinearMode mode = LinearMode::Temperature;
    std::size_t classes = 0;
    double temperature = 1.0;   // Temperature
    std::vector<double> scale;  // Vector, VectorBias
    Matrix weights;             // MatrixBias
    std::vector<double> bias;   // length K; all zero for modes without bias

    static LinearLogitMap identity(LinearMode mode, std::size_t classes);

    /// Free parameters in optimizer order. Temperature is stored as log T.
    [[nodiscard]] std::vector<double> parameters() const;
    static LinearLogitMap from_parameters(LinearMode mode, std::size_t classes, std::span<const double> params);
    static std::size_t parameter_count(LinearMode mode, std::size_t classes);

    /// W z + b.
    [[nodiscard]] std::vector<double> transform(std::span<const double> logits) const;

    [[nodiscard]] std::size_t num_classes() const noexcept { return classes; }
};

using CalibrationMap = std::variant<HistogramMap, IsotonicMap, LinearLogitMap>;

std::size_t num_classes(const CalibrationMap& map);

// "histogram", "isotonic", "temperature", "vector", "vector-bias", "matrix-bias".
std::string method_name(const CalibrationMap& map);

struct FitReport {
    double initial_nll = 0.0;
    double final_nll = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
    double gradient_norm = 0.0;
    std::string summary;
};

// --- nonparametric maps ---

HistogramMap fit_histogram_binning(const PredictionSet& calib,
                                   const BinningConfig& config = {kDefaultHistogramBins, BinScheme::EqualWidth});

IsotonicMap fit_isotonic(const PredictionSet& calib);

/// Evaluates every one-vs-rest map on its class column and renormalizes each
/// row; rows whose calibrated mass is below 1e-12 become uniform.
PredictionSet apply_nonparametric(const HistogramMap& map, const PredictionSet& ps);
PredictionSet apply_nonparametric(const IsotonicMap& map, const PredictionSet& ps);

// --- linear maps on logits ---

/// Logits used for fitting and applying linear maps: the stored logits, or
/// log(max(p, 1e-12)) for probability-only input.
Matrix working_logits(const PredictionSet& ps);

std::vector<double> scale_logits(std::span<const double> logits, const LinearLogitMap& map);

struct ObjectiveValue {
    double value = 0.0;
    std::vector<double> gradient;
};

/// Mean NLL of softmax(W z + b) over (logits, labels) and its analytic
/// gradient with respect to the mode's free parameters.
ObjectiveValue nll_objective_grad(std::span<const double> params, const Matrix& logits,
                                  std::span<const int> labels, LinearMode mode);

struct LinearFitOptions {
    double gradient_tolerance = 1e-7;
    std::size_t max_iterations = 10000;
};

std::pair<LinearLogitMap, FitReport> fit_linear_scaling(const PredictionSet& calib, LinearMode mode,
                                                        const LinearFitOptions& options = {});

// --- dispatch ---

/// Applies any map. Linear maps keep the transformed logits in the output.
/// Throws ClassCountMismatch when K differs.
PredictionSet apply_map(const CalibrationMap& map, const PredictionSet& ps);

}  // namespace calim
