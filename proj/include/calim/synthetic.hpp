#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "calim/data_model.hpp"

namespace calim {

/// SplitMix64: a Weyl counter (step 0x9E3779B97F4A7C15) pushed through a
/// fixed 64-bit finalizer. Output i depends only on seed + (i + 1) * step.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Top 53 bits scaled into [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Box-Muller on (1 - u1, u2); the sine half is cached for the next call.
    double normal();

private:
    std::uint64_t state_;
    std::optional<double> spare_;
};

enum class SynthMode { Distorted, Calibrated };

struct SynthConfig {
    std::size_t n = 1000;
    std::size_t classes = 10;
    double sigma = 2.0;       // scale of the true logits
    double distortion = 1.0;  // reported logits = distortion * true logits
    std::uint64_t seed = 0;
    SynthMode mode = SynthMode::Distorted;  // Calibrated forces distortion = 1
};

/// Draws true logits z ~ N(0, sigma^2) per entry, samples y ~ softmax(z) and
/// reports s * z. s > 1 gives overconfident scores, s < 1 underconfident.
/// Throws InvalidConfig for n < 1, K < 2, sigma < 0 or s <= 0.
PredictionSet generate(const SynthConfig& config);

}  // namespace calim
