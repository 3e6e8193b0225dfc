#include "calim/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calim/error.hpp"
#include "calim/metrics.hpp"

namespace calim {

namespace {

double clamped_log(double p) { return std::log(std::max(p, kLogClamp)); }

void require_same_length(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    "distributions have lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
}

}  // namespace

double cross_entropy(std::span<const double> target, std::span<const double> predicted) {
    require_same_length(target, predicted);
    double total = 0.0;
    for (std::size_t j = 0; j < target.size(); ++j) {
        if (target[j] != 0.0) total -= target[j] * clamped_log(predicted[j]);
    }
    return total;
}

std::vector<double> smooth_labels(std::span<const double> one_hot, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::AlphaOutOfRange, "smoothing alpha " + std::to_string(alpha) + " outside [0, 1]");
    }
    const double floor = alpha / static_cast<double>(one_hot.size());
    std::vector<double> out(one_hot.size());
    for (std::size_t j = 0; j < one_hot.size(); ++j) out[j] = (1.0 - alpha) * one_hot[j] + floor;
    return out;
}

double focal_loss(std::span<const double> predicted, std::size_t true_class, double gamma) {
    if (!(gamma >= 0.0)) throw Error(ErrorCode::NegativeGamma, "focal gamma must be >= 0");
    if (true_class >= predicted.size()) {
        throw Error(ErrorCode::ClassOutOfRange, "true class " + std::to_string(true_class) + " out of range");
    }
    const double p = predicted[true_class];
    return -std::pow(1.0 - p, gamma) * clamped_log(p);
}

double entropy(std::span<const double> dist) {
    double total = 0.0;
    for (double a : dist) {
        if (a > 0.0) total -= a * std::log(a);
    }
    return total;
}

double kl_divergence(std::span<const double> target, std::span<const double> predicted) {
    require_same_length(target, predicted);
    double total = 0.0;
    for (std::size_t j = 0; j < target.size(); ++j) {
        if (target[j] > 0.0) total += target[j] * (std::log(target[j]) - clamped_log(predicted[j]));
    }
    return total;
}

}  // namespace calim
