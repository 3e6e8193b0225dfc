#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace calim {

// Returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

// Maps a point back onto the feasible set in place.
using Projection = std::function<void(std::span<double> x)>;

struct DescentOptions {
    double gradient_tolerance = 1e-7;
    std::size_t max_iterations = 10000;
    double armijo = 1e-4;
    std::size_t max_halvings = 60;
    Projection project;  // optional
};

struct DescentResult {
    std::vector<double> x;
    double initial_value = 0.0;
    double value = 0.0;
    double gradient_norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Full-batch projected gradient descent with a backtracking (Armijo,
/// halving) line search. The first trial step of each iteration is the
/// Barzilai-Borwein step from the previous move; accepted steps never
/// increase the objective.
DescentResult minimize_gradient_descent(const Objective& objective, std::vector<double> x0,
                                        const DescentOptions& options = {});

}  // namespace calim
