#include "calim/optimize.hpp"

#include <cmath>

namespace calim {

namespace {

// Norm of x - P(x - g): the gradient norm, corrected for active bounds.
double projected_gradient_norm(std::span<const double> x, std::span<const double> g, const Projection& project) {
    std::vector<double> probe(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) probe[i] = x[i] - g[i];
    if (project) project(probe);
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sq += (x[i] - probe[i]) * (x[i] - probe[i]);
    return std::sqrt(sq);
}

}  // namespace

DescentResult minimize_gradient_descent(const Objective& objective, std::vector<double> x0,
                                        const DescentOptions& options) {
    const std::size_t dim = x0.size();
    DescentResult result;
    if (options.project) options.project(x0);
    result.x = std::move(x0);

    std::vector<double> grad(dim);
    double value = objective(result.x, grad);
    result.initial_value = value;

    std::vector<double> trial(dim);
    std::vector<double> trial_grad(dim);
    std::vector<double> prev_x;
    std::vector<double> prev_grad;
    double step = 1.0;

    std::size_t it = 0;
    for (; it < options.max_iterations; ++it) {
        result.gradient_norm = projected_gradient_norm(result.x, grad, options.project);
        if (result.gradient_norm < options.gradient_tolerance) {
            result.converged = true;
            break;
        }

        if (!prev_x.empty()) {
            double ss = 0.0;
            double sy = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double s = result.x[i] - prev_x[i];
                const double y = grad[i] - prev_grad[i];
                ss += s * s;
                sy += s * y;
            }
            step = sy > 0.0 ? ss / sy : 2.0 * step;
        }

        bool accepted = false;
        double trial_value = value;
        for (std::size_t h = 0; h <= options.max_halvings; ++h, step *= 0.5) {
            for (std::size_t i = 0; i < dim; ++i) trial[i] = result.x[i] - step * grad[i];
            if (options.project) options.project(trial);
            double decrease = 0.0;
            for (std::size_t i = 0; i < dim; ++i) decrease += grad[i] * (result.x[i] - trial[i]);
            trial_value = objective(trial, trial_grad);
            if (std::isfinite(trial_value) && trial_value <= value - options.armijo * decrease) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // no representable decrease left

        prev_x = result.x;
        prev_grad = grad;
        result.x = trial;
        grad = trial_grad;
        value = trial_value;
    }

    if (!result.converged) {
        result.gradient_norm = projected_gradient_norm(result.x, grad, options.project);
        result.converged = result.gradient_norm < options.gradient_tolerance;
    }
    result.iterations = it;
    result.value = value;
    return result;
}

}  // namespace calim
