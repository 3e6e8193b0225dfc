#pragma once

#include <random>
#include <vector>

#include "calim/data_model.hpp"

namespace testing_helpers {

// Labels are given 1-based, as in a predictions file.
inline calim::PredictionSet probs_set(const calim::Rows& probs, std::vector<int> labels) {
    for (int& y : labels) --y;
    return calim::validate(std::nullopt, probs, labels);
}

inline calim::PredictionSet logits_set(const calim::Rows& logits, std::vector<int> labels) {
    for (int& y : labels) --y;
    return calim::validate(logits, std::nullopt, labels);
}

inline std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t k, double concentration = 1.0) {
    std::gamma_distribution<double> gamma(concentration, 1.0);
    std::vector<double> out(k);
    double total = 0.0;
    for (double& x : out) {
        x = gamma(rng) + 1e-300;
        total += x;
    }
    for (double& x : out) x /= total;
    return out;
}

inline calim::Rows to_rows(const calim::Matrix& m) {
    calim::Rows rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) rows[i].assign(m.row(i).begin(), m.row(i).end());
    return rows;
}

}  // namespace testing_helpers
