#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace calim {

// All logs are natural; log arguments are clamped below at 1e-12.

/// -sum_j y_j log a_j. `target` may be soft.
double cross_entropy(std::span<const double> target, std::span<const double> predicted);

/// (1 - alpha) y + alpha / K. Throws AlphaOutOfRange unless 0 <= alpha <= 1.
std::vector<double> smooth_labels(std::span<const double> one_hot, double alpha);

/// -(1 - a_j)^gamma log a_j for true class j. Throws NegativeGamma.
double focal_loss(std::span<const double> predicted, std::size_t true_class, double gamma);

/// -sum_j a_j log a_j with 0 log 0 = 0.
double entropy(std::span<const double> dist);

/// sum_j y_j log(y_j / a_j) with 0 log 0 = 0.
double kl_divergence(std::span<const double> target, std::span<const double> predicted);

}  // namespace calim
