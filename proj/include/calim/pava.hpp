#pragma once

#include <span>
#include <vector>

namespace calim {

/// Weighted least-squares isotonic fit by pool-adjacent-violators.
///
/// Returns the nondecreasing theta minimizing sum w_i (theta_i - v_i)^2.
/// Pooled blocks carry the weighted mean of their members. Throws EmptyInput
/// for empty values, LengthMismatch for mismatched lengths and
/// NonPositiveWeight when any weight is <= 0.
std::vector<double> pava(std::span<const double> values, std::span<const double> weights);

// Unit-weight convenience overload.
std::vector<double> pava(std::span<const double> values);

}  // namespace calim
