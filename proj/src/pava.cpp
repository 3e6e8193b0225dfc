#include "calim/pava.hpp"

#include <cmath>
#include <string>

#include "calim/error.hpp"

namespace calim {

namespace {

struct Block {
    double mean;
    double weight;
    std::size_t length;
};

}  // namespace

std::vector<double> pava(std::span<const double> values, std::span<const double> weights) {
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "pava needs at least one value");
    if (values.size() != weights.size()) {
        throw Error(ErrorCode::LengthMismatch, "pava values and weights differ in length");
    }

    std::vector<Block> stack;
    stack.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
            throw Error(ErrorCode::NonPositiveWeight, "weight " + std::to_string(i) + " is not positive");
        }
        stack.push_back({values[i], weights[i], 1});
        // Merge backwards while the newest block violates monotonicity.
        while (stack.size() > 1 && stack[stack.size() - 2].mean >= stack.back().mean) {
            const Block top = stack.back();
            stack.pop_back();
            Block& prev = stack.back();
            const double w = prev.weight + top.weight;
            prev.mean = (prev.mean * prev.weight + top.mean * top.weight) / w;
            prev.weight = w;
            prev.length += top.length;
        }
    }

    std::vector<double> fitted;
    fitted.reserve(values.size());
    for (const Block& b : stack) fitted.insert(fitted.end(), b.length, b.mean);
    return fitted;
}

std::vector<double> pava(std::span<const double> values) {
    const std::vector<double> ones(values.size(), 1.0);
    return pava(values, ones);
}

}  // namespace calim
