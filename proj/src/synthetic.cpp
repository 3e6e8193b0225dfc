#include "calim/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "calim/error.hpp"

namespace calim {

double SplitMix64::normal() {
    if (spare_) {
        const double out = *spare_;
        spare_.reset();
        return out;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

PredictionSet generate(const SynthConfig& config) {
    if (config.n < 1) throw Error(ErrorCode::InvalidConfig, "n must be at least 1");
    if (config.classes < 2) throw Error(ErrorCode::InvalidConfig, "need at least 2 classes");
    if (!(config.sigma >= 0.0) || !std::isfinite(config.sigma)) {
        throw Error(ErrorCode::InvalidConfig, "sigma must be finite and >= 0");
    }
    if (!(config.distortion > 0.0) || !std::isfinite(config.distortion)) {
        throw Error(ErrorCode::InvalidConfig, "distortion must be finite and > 0");
    }
    const double s = config.mode == SynthMode::Calibrated ? 1.0 : config.distortion;
    const std::size_t k = config.classes;

    SplitMix64 rng(config.seed);
    Matrix logits(config.n, k);
    std::vector<int> labels(config.n);
    std::vector<double> z(k);
    for (std::size_t i = 0; i < config.n; ++i) {
        for (std::size_t j = 0; j < k; ++j) z[j] = config.sigma * rng.normal();
        const std::vector<double> p = softmax(z);
        const double u = rng.uniform();
        std::size_t y = k - 1;
        double cumulative = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            cumulative += p[j];
            if (u < cumulative) {
                y = j;
                break;
            }
        }
        labels[i] = static_cast<int>(y);
        for (std::size_t j = 0; j < k; ++j) logits(i, j) = s * z[j];
    }
    return PredictionSet::from_logits(std::move(logits), std::move(labels));
}

}  // namespace calim
