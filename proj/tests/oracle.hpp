#pragma once

// Independent reference evaluators written straight from the defining
// formulas. They deliberately share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

inline std::size_t first_argmax(const std::vector<double>& row) {
    std::size_t best = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] > row[best]) best = j;
    }
    return best;
}

// Equal-width membership: [m/M, (m+1)/M), last interval closed at 1.
inline bool in_bin(double p, std::size_t m, std::size_t bins) {
    const double lo = static_cast<double>(m) / static_cast<double>(bins);
    const double hi = static_cast<double>(m + 1) / static_cast<double>(bins);
    if (m + 1 == bins) return p >= lo && p <= 1.0;
    return p >= lo && p < hi;
}

// (1/n) sum_m | sum_{i in B_m} hit_i - sum_{i in B_m} score_i |
inline double binary_ece(const std::vector<double>& score, const std::vector<int>& hit, std::size_t bins) {
    double total = 0.0;
    for (std::size_t m = 0; m < bins; ++m) {
        double hits = 0.0;
        double conf = 0.0;
        for (std::size_t i = 0; i < score.size(); ++i) {
            if (!in_bin(score[i], m, bins)) continue;
            hits += hit[i];
            conf += score[i];
        }
        total += std::abs(hits - conf);
    }
    return total / static_cast<double>(score.size());
}

inline double binary_mce(const std::vector<double>& score, const std::vector<int>& hit, std::size_t bins) {
    double worst = 0.0;
    for (std::size_t m = 0; m < bins; ++m) {
        double hits = 0.0;
        double conf = 0.0;
        double count = 0.0;
        for (std::size_t i = 0; i < score.size(); ++i) {
            if (!in_bin(score[i], m, bins)) continue;
            hits += hit[i];
            conf += score[i];
            count += 1.0;
        }
        if (count > 0) worst = std::max(worst, std::abs(hits / count - conf / count));
    }
    return worst;
}

inline void top_label(const Rows& probs, const std::vector<int>& labels, std::vector<double>& conf,
                      std::vector<int>& correct) {
    conf.clear();
    correct.clear();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const std::size_t j = first_argmax(probs[i]);
        conf.push_back(probs[i][j]);
        correct.push_back(static_cast<int>(j) == labels[i] ? 1 : 0);
    }
}

inline double ece(const Rows& probs, const std::vector<int>& labels, std::size_t bins) {
    std::vector<double> conf;
    std::vector<int> correct;
    top_label(probs, labels, conf, correct);
    return binary_ece(conf, correct, bins);
}

inline double mce(const Rows& probs, const std::vector<int>& labels, std::size_t bins) {
    std::vector<double> conf;
    std::vector<int> correct;
    top_label(probs, labels, conf, correct);
    return binary_mce(conf, correct, bins);
}

inline double cwece(const Rows& probs, const std::vector<int>& labels, std::size_t bins) {
    const std::size_t k = probs.front().size();
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> score;
        std::vector<int> hit;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            score.push_back(probs[i][j]);
            hit.push_back(labels[i] == static_cast<int>(j) ? 1 : 0);
        }
        total += binary_ece(score, hit, bins);
    }
    return total / static_cast<double>(k);
}

inline double nll(const Rows& probs, const std::vector<int>& labels) {
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) total += -std::log(std::max(probs[i][labels[i]], 1e-12));
    return total / static_cast<double>(probs.size());
}

inline double brier(const Rows& probs, const std::vector<int>& labels) {
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        for (std::size_t j = 0; j < probs[i].size(); ++j) {
            const double target = labels[i] == static_cast<int>(j) ? 1.0 : 0.0;
            total += (probs[i][j] - target) * (probs[i][j] - target);
        }
    }
    return total / static_cast<double>(probs.size());
}

/// Exhaustive isotonic least squares: every split of the sequence into
/// contiguous blocks whose weighted means are nondecreasing is a candidate;
/// the optimum is the candidate with the smallest weighted squared error.
inline std::vector<double> isotonic_brute_force(const std::vector<double>& v, const std::vector<double>& w) {
    const std::size_t m = v.size();
    std::vector<double> best;
    double best_loss = std::numeric_limits<double>::infinity();
    const std::size_t splits = m > 0 ? m - 1 : 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << splits); ++mask) {
        std::vector<double> fit(m);
        std::size_t start = 0;
        double prev_mean = -std::numeric_limits<double>::infinity();
        bool monotone = true;
        for (std::size_t i = 0; i < m && monotone; ++i) {
            const bool cut = i + 1 == m || ((mask >> i) & 1U);
            if (!cut) continue;
            double sw = 0.0;
            double swv = 0.0;
            for (std::size_t t = start; t <= i; ++t) {
                sw += w[t];
                swv += w[t] * v[t];
            }
            const double mean = swv / sw;
            if (mean < prev_mean) monotone = false;
            for (std::size_t t = start; t <= i; ++t) fit[t] = mean;
            prev_mean = mean;
            start = i + 1;
        }
        if (!monotone) continue;
        double loss = 0.0;
        for (std::size_t t = 0; t < m; ++t) loss += w[t] * (fit[t] - v[t]) * (fit[t] - v[t]);
        if (loss < best_loss - 1e-15) {
            best_loss = loss;
            best = fit;
        }
    }
    return best;
}

/// Central differences: (f(x + h e_i) - f(x - h e_i)) / 2h.
inline std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                              const std::vector<double>& x, double h) {
    std::vector<double> grad(x.size());
    std::vector<double> probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double up = f(probe);
        probe[i] = x[i] - h;
        const double down = f(probe);
        probe[i] = x[i];
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

/// Mean NLL of softmax(u) where u is built by `affine` from each logit row.
inline double affine_nll(const Rows& logits, const std::vector<int>& labels,
                         const std::function<std::vector<double>(const std::vector<double>&)>& affine) {
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const std::vector<double> u = affine(logits[i]);
        double denom = 0.0;
        for (double x : u) denom += std::exp(x);
        total += std::log(denom) - u[labels[i]];
    }
    return total / static_cast<double>(logits.size());
}

}  // namespace oracle
