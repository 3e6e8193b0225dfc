#include "calim/calibrators.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <type_traits>

#include "calim/error.hpp"
#include "calim/pava.hpp"

namespace calim {

double HistogramMap::evaluate(std::size_t j, double p) const {
    return theta[j][assign_bin(p, edges[j])];
}

double IsotonicMap::evaluate(std::size_t j, double p) const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "confidence " + std::to_string(p) + " outside [0, 1]");
    }
    const auto& alpha = breakpoints[j];
    const auto it = std::upper_bound(alpha.begin(), alpha.end(), p);
    const auto m = std::min(static_cast<std::size_t>(it - alpha.begin()), levels[j].size());
    return levels[j][m - 1];
}

std::size_t num_classes(const CalibrationMap& map) {
    return std::visit([](const auto& m) { return m.num_classes(); }, map);
}

std::string method_name(const CalibrationMap& map) {
    if (std::holds_alternative<HistogramMap>(map)) return "histogram";
    if (std::holds_alternative<IsotonicMap>(map)) return "isotonic";
    return to_string(std::get<LinearLogitMap>(map).mode);
}

HistogramMap fit_histogram_binning(const PredictionSet& calib, const BinningConfig& config) {
    if (config.bins == 0) throw Error(ErrorCode::InvalidBinCount, "bin count must be positive");
    HistogramMap map;
    const std::size_t k = calib.num_classes();
    map.edges.reserve(k);
    map.theta.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::vector<double> scores = calib.class_column(j);
        BinEdges edges = make_edges(config, scores);
        const std::size_t bins = edges.count();
        std::vector<double> positives(bins, 0.0);
        std::vector<std::size_t> counts(bins, 0);
        for (std::size_t i = 0; i < calib.size(); ++i) {
            const std::size_t m = assign_bin(scores[i], edges);
            ++counts[m];
            if (static_cast<std::size_t>(calib.label(i)) == j) positives[m] += 1.0;
        }
        std::vector<double> theta(bins);
        for (std::size_t m = 0; m < bins; ++m) {
            theta[m] = counts[m] > 0 ? positives[m] / static_cast<double>(counts[m]) : edges.midpoint(m);
        }
        map.edges.push_back(std::move(edges));
        map.theta.push_back(std::move(theta));
    }
    return map;
}

IsotonicMap fit_isotonic(const PredictionSet& calib) {
    IsotonicMap map;
    const std::size_t k = calib.num_classes();
    const std::size_t n = calib.size();
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < k; ++j) {
        const std::vector<double> scores = calib.class_column(j);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

        // Tied confidences are pooled up front so the map stays a function of p.
        std::vector<double> xs;
        std::vector<double> rates;
        std::vector<double> weights;
        for (std::size_t idx : order) {
            const double hit = static_cast<std::size_t>(calib.label(idx)) == j ? 1.0 : 0.0;
            if (!xs.empty() && xs.back() == scores[idx]) {
                const double w = weights.back() + 1.0;
                rates.back() = (rates.back() * weights.back() + hit) / w;
                weights.back() = w;
            } else {
                xs.push_back(scores[idx]);
                rates.push_back(hit);
                weights.push_back(1.0);
            }
        }
        const std::vector<double> fitted = pava(rates, weights);

        std::vector<double> alpha{0.0};
        std::vector<double> level{fitted.front()};
        for (std::size_t g = 1; g < fitted.size(); ++g) {
            if (fitted[g] == fitted[g - 1]) continue;
            alpha.push_back(0.5 * (xs[g - 1] + xs[g]));
            level.push_back(fitted[g]);
        }
        alpha.push_back(1.0);
        map.breakpoints.push_back(std::move(alpha));
        map.levels.push_back(std::move(level));
    }
    return map;
}

namespace {

template <class Map>
PredictionSet apply_one_vs_rest(const Map& map, const PredictionSet& ps) {
    const std::size_t k = ps.num_classes();
    if (map.num_classes() != k) {
        throw Error(ErrorCode::ClassCountMismatch, "map has " + std::to_string(map.num_classes()) +
                                                       " classes, input has " + std::to_string(k));
    }
    Matrix out(ps.size(), k);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto row = ps.prob_row(i);
        auto q = out.row(i);
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            q[j] = map.evaluate(j, row[j]);
            total += q[j];
        }
        if (total < 1e-12) {
            std::fill(q.begin(), q.end(), 1.0 / static_cast<double>(k));
        } else {
            for (double& v : q) v /= total;
        }
    }
    return PredictionSet::from_probs(std::move(out), std::vector<int>(ps.labels().begin(), ps.labels().end()));
}

}  // namespace

PredictionSet apply_nonparametric(const HistogramMap& map, const PredictionSet& ps) {
    return apply_one_vs_rest(map, ps);
}

PredictionSet apply_nonparametric(const IsotonicMap& map, const PredictionSet& ps) {
    return apply_one_vs_rest(map, ps);
}

PredictionSet apply_map(const CalibrationMap& map, const PredictionSet& ps) {
    if (num_classes(map) != ps.num_classes()) {
        throw Error(ErrorCode::ClassCountMismatch, "map has " + std::to_string(num_classes(map)) +
                                                       " classes, input has " + std::to_string(ps.num_classes()));
    }
    return std::visit(
        [&](const auto& m) -> PredictionSet {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, LinearLogitMap>) {
                const Matrix logits = working_logits(ps);
                Matrix scaled(ps.size(), ps.num_classes());
                for (std::size_t i = 0; i < ps.size(); ++i) {
                    const auto z = m.transform(logits.row(i));
                    std::copy(z.begin(), z.end(), scaled.row(i).begin());
                }
                return PredictionSet::from_logits(std::move(scaled),
                                                  std::vector<int>(ps.labels().begin(), ps.labels().end()));
            } else {
                return apply_nonparametric(m, ps);
            }
        },
        map);
}

}  // namespace calim
