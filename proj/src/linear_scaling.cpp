#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "calim/calibrators.hpp"
#include "calim/error.hpp"
#include "calim/optimize.hpp"

namespace calim {

namespace {

// log T is kept within [-ln 100, ln 100].
const double kMaxLogTemperature = std::log(100.0);

bool has_bias(LinearMode mode) { return mode == LinearMode::VectorBias || mode == LinearMode::MatrixBias; }

}  // namespace

std::string to_string(LinearMode mode) {
    switch (mode) {
        case LinearMode::Temperature: return "temperature";
        case LinearMode::Vector: return "vector";
        case LinearMode::VectorBias: return "vector-bias";
        case LinearMode::MatrixBias: return "matrix-bias";
    }
    return "unknown";
}

LinearMode parse_linear_mode(const std::string& text) {
    if (text == "temperature") return LinearMode::Temperature;
    if (text == "vector") return LinearMode::Vector;
    if (text == "vector-bias") return LinearMode::VectorBias;
    if (text == "matrix-bias") return LinearMode::MatrixBias;
    throw Error(ErrorCode::ParseError, "unknown linear scaling mode '" + text + "'");
}

LinearLogitMap LinearLogitMap::identity(LinearMode mode, std::size_t classes) {
    LinearLogitMap map;
    map.mode = mode;
    map.classes = classes;
    map.temperature = 1.0;
    if (mode == LinearMode::Vector || mode == LinearMode::VectorBias) map.scale.assign(classes, 1.0);
    if (mode == LinearMode::MatrixBias) map.weights = Matrix::identity(classes);
    map.bias.assign(classes, 0.0);
    return map;
}

std::size_t LinearLogitMap::parameter_count(LinearMode mode, std::size_t classes) {
    switch (mode) {
        case LinearMode::Temperature: return 1;
        case LinearMode::Vector: return classes;
        case LinearMode::VectorBias: return 2 * classes;
        case LinearMode::MatrixBias: return classes * classes + classes;
    }
    return 0;
}

std::vector<double> LinearLogitMap::parameters() const {
    std::vector<double> params;
    params.reserve(parameter_count(mode, classes));
    switch (mode) {
        case LinearMode::Temperature:
            params.push_back(std::log(temperature));
            break;
        case LinearMode::Vector:
        case LinearMode::VectorBias:
            params.insert(params.end(), scale.begin(), scale.end());
            break;
        case LinearMode::MatrixBias:
            params.insert(params.end(), weights.data().begin(), weights.data().end());
            break;
    }
    if (has_bias(mode)) params.insert(params.end(), bias.begin(), bias.end());
    return params;
}

LinearLogitMap LinearLogitMap::from_parameters(LinearMode mode, std::size_t classes,
                                               std::span<const double> params) {
    if (params.size() != parameter_count(mode, classes)) {
        throw Error(ErrorCode::LengthMismatch, "wrong parameter count for " + to_string(mode) + " scaling");
    }
    LinearLogitMap map = identity(mode, classes);
    std::size_t offset = 0;
    switch (mode) {
        case LinearMode::Temperature:
            map.temperature = std::exp(params[0]);
            offset = 1;
            break;
        case LinearMode::Vector:
        case LinearMode::VectorBias:
            std::copy_n(params.begin(), classes, map.scale.begin());
            offset = classes;
            break;
        case LinearMode::MatrixBias:
            std::copy_n(params.begin(), classes * classes, map.weights.data().begin());
            offset = classes * classes;
            break;
    }
    if (has_bias(mode)) std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(offset), classes, map.bias.begin());
    return map;
}

std::vector<double> LinearLogitMap::transform(std::span<const double> logits) const {
    if (logits.size() != classes) {
        throw Error(ErrorCode::ClassCountMismatch, "map expects " + std::to_string(classes) + " logits, got " +
                                                       std::to_string(logits.size()));
    }
    std::vector<double> out(classes);
    switch (mode) {
        case LinearMode::Temperature:
            for (std::size_t k = 0; k < classes; ++k) out[k] = logits[k] / temperature;
            break;
        case LinearMode::Vector:
        case LinearMode::VectorBias:
            for (std::size_t k = 0; k < classes; ++k) out[k] = scale[k] * logits[k] + bias[k];
            break;
        case LinearMode::MatrixBias:
            for (std::size_t k = 0; k < classes; ++k) {
                double acc = bias[k];
                for (std::size_t l = 0; l < classes; ++l) acc += weights(k, l) * logits[l];
                out[k] = acc;
            }
            break;
    }
    return out;
}

Matrix working_logits(const PredictionSet& ps) {
    if (ps.has_logits()) return *ps.logits();
    Matrix out(ps.size(), ps.num_classes());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto row = ps.prob_row(i);
        for (std::size_t j = 0; j < row.size(); ++j) out(i, j) = std::log(std::max(row[j], kLogClamp));
    }
    return out;
}

std::vector<double> scale_logits(std::span<const double> logits, const LinearLogitMap& map) {
    for (double z : logits) {
        if (!std::isfinite(z)) throw Error(ErrorCode::NonFinite, "logit is not finite");
    }
    std::vector<double> out = map.transform(logits);
    softmax_inplace(out);
    return out;
}

ObjectiveValue nll_objective_grad(std::span<const double> params, const Matrix& logits,
                                  std::span<const int> labels, LinearMode mode) {
    const std::size_t n = logits.rows();
    const std::size_t k = logits.cols();
    if (labels.size() != n) throw Error(ErrorCode::DimensionMismatch, "labels do not match logit rows");
    if (n == 0) throw Error(ErrorCode::EmptyInput, "no samples for the objective");
    if (params.size() != LinearLogitMap::parameter_count(mode, k)) {
        throw Error(ErrorCode::LengthMismatch, "wrong parameter count for " + to_string(mode) + " scaling");
    }
    const LinearLogitMap map = LinearLogitMap::from_parameters(mode, k, params);
    const std::size_t bias_offset = mode == LinearMode::VectorBias ? k : k * k;

    ObjectiveValue out;
    out.gradient.assign(params.size(), 0.0);
    std::vector<double> g(k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto z = logits.row(i);
        const auto y = static_cast<std::size_t>(labels[i]);
        const std::vector<double> u = map.transform(z);
        const double top = *std::max_element(u.begin(), u.end());
        double total = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            g[c] = std::exp(u[c] - top);
            total += g[c];
        }
        out.value += top + std::log(total) - u[y];
        // g = softmax(u) - onehot(y): gradient of the sample loss w.r.t. u.
        for (std::size_t c = 0; c < k; ++c) g[c] /= total;
        g[y] -= 1.0;

        switch (mode) {
            case LinearMode::Temperature: {
                double d = 0.0;
                for (std::size_t c = 0; c < k; ++c) d -= g[c] * u[c];
                out.gradient[0] += d;
                break;
            }
            case LinearMode::Vector:
            case LinearMode::VectorBias:
                for (std::size_t c = 0; c < k; ++c) out.gradient[c] += g[c] * z[c];
                break;
            case LinearMode::MatrixBias:
                for (std::size_t r = 0; r < k; ++r) {
                    for (std::size_t c = 0; c < k; ++c) out.gradient[r * k + c] += g[r] * z[c];
                }
                break;
        }
        if (has_bias(mode)) {
            for (std::size_t c = 0; c < k; ++c) out.gradient[bias_offset + c] += g[c];
        }
    }
    const auto scale = 1.0 / static_cast<double>(n);
    out.value *= scale;
    for (double& d : out.gradient) d *= scale;
    return out;
}

std::pair<LinearLogitMap, FitReport> fit_linear_scaling(const PredictionSet& calib, LinearMode mode,
                                                        const LinearFitOptions& options) {
    const Matrix logits = working_logits(calib);
    const std::span<const int> labels = calib.labels();
    const std::size_t k = calib.num_classes();

    Objective objective = [&](std::span<const double> x, std::span<double> grad) {
        ObjectiveValue v = nll_objective_grad(x, logits, labels, mode);
        std::copy(v.gradient.begin(), v.gradient.end(), grad.begin());
        return v.value;
    };

    DescentOptions descent;
    descent.gradient_tolerance = options.gradient_tolerance;
    descent.max_iterations = options.max_iterations;
    if (mode == LinearMode::Temperature) {
        descent.project = [](std::span<double> x) {
            x[0] = std::clamp(x[0], -kMaxLogTemperature, kMaxLogTemperature);
        };
    }

    const DescentResult result =
        minimize_gradient_descent(objective, LinearLogitMap::identity(mode, k).parameters(), descent);

    FitReport report;
    report.initial_nll = result.initial_value;
    report.final_nll = result.value;
    report.iterations = result.iterations;
    report.converged = result.converged;
    report.gradient_norm = result.gradient_norm;

    LinearLogitMap map = LinearLogitMap::from_parameters(mode, k, result.x);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s scaling: NLL %.6f -> %.6f in %zu iterations (|grad| %.3g, %s)",
                  to_string(mode).c_str(), report.initial_nll, report.final_nll, report.iterations,
                  report.gradient_norm, report.converged ? "converged" : "not converged");
    report.summary = buf;
    if (mode == LinearMode::Temperature) {
        std::snprintf(buf, sizeof buf, "; T = %.6f", map.temperature);
        report.summary += buf;
    }
    return {std::move(map), std::move(report)};
}

}  // namespace calim
