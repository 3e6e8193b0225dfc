#include "calim/binning.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calim/error.hpp"

namespace calim {

BinEdges equal_width_edges(std::size_t bins) {
    if (bins == 0) throw Error(ErrorCode::InvalidBinCount, "bin count must be positive");
    BinEdges out;
    out.scheme = BinScheme::EqualWidth;
    out.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        out.edges[i] = static_cast<double>(i) / static_cast<double>(bins);
    }
    out.edges.back() = 1.0;
    return out;
}

BinEdges equal_frequency_edges(std::span<const double> confidences, std::size_t bins) {
    if (bins == 0) throw Error(ErrorCode::InvalidBinCount, "bin count must be positive");
    if (confidences.empty()) throw Error(ErrorCode::EmptyInput, "no confidences to take quantiles of");

    std::vector<double> sorted(confidences.begin(), confidences.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    BinEdges out;
    out.scheme = BinScheme::EqualFrequency;
    out.edges.push_back(0.0);
    for (std::size_t i = 1; i < bins; ++i) {
        // k objects fall strictly left of cut i.
        const std::size_t k = i * n / bins;
        if (k == 0 || k == n) continue;
        if (sorted[k - 1] == sorted[k]) continue;
        const double cut = 0.5 * (sorted[k - 1] + sorted[k]);
        if (cut <= out.edges.back() || cut >= 1.0) continue;
        out.edges.push_back(cut);
    }
    out.edges.push_back(1.0);
    return out;
}

BinEdges make_edges(const BinningConfig& config, std::span<const double> confidences) {
    return config.scheme == BinScheme::EqualWidth ? equal_width_edges(config.bins)
                                                  : equal_frequency_edges(confidences, config.bins);
}

std::size_t assign_bin(double p, const BinEdges& edges) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "confidence " + std::to_string(p) + " outside [0, 1]");
    }
    const auto it = std::upper_bound(edges.edges.begin(), edges.edges.end(), p);
    const auto m = static_cast<std::size_t>(it - edges.edges.begin());
    return std::min(m, edges.count()) - 1;
}

ReliabilityTable binary_reliability_table(std::span<const double> scores, const std::vector<bool>& hits,
                                          const BinEdges& edges) {
    if (scores.size() != hits.size()) {
        throw Error(ErrorCode::LengthMismatch, "scores and hits differ in length");
    }
    const std::size_t bins = edges.count();
    std::vector<double> hit_sum(bins, 0.0);
    std::vector<double> conf_sum(bins, 0.0);

    ReliabilityTable table;
    table.total = scores.size();
    table.edges = edges;
    table.bins.resize(bins);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const std::size_t m = assign_bin(scores[i], edges);
        ++table.bins[m].count;
        hit_sum[m] += hits[i] ? 1.0 : 0.0;
        conf_sum[m] += scores[i];
    }
    for (std::size_t m = 0; m < bins; ++m) {
        auto& bin = table.bins[m];
        bin.lower = edges.lower(m);
        bin.upper = edges.upper(m);
        if (bin.count > 0) {
            const auto c = static_cast<double>(bin.count);
            bin.accuracy = hit_sum[m] / c;
            bin.confidence = conf_sum[m] / c;
        }
    }
    return table;
}

ReliabilityTable reliability_table(const PredictionSet& ps, const BinEdges& edges) {
    const TopLabelView top = top_label(ps);
    std::vector<bool> correct(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) correct[i] = top.pred[i] == ps.label(i);
    auto table = binary_reliability_table(top.conf, correct, edges);
    table.mode = ReliabilityTable::Mode::TopLabel;
    return table;
}

ReliabilityTable classwise_reliability_table(const PredictionSet& ps, const BinEdges& edges, std::size_t j) {
    if (j >= ps.num_classes()) {
        throw Error(ErrorCode::ClassOutOfRange,
                    "class " + std::to_string(j) + " outside 0.." + std::to_string(ps.num_classes() - 1));
    }
    const std::vector<double> scores = ps.class_column(j);
    std::vector<bool> positive(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) positive[i] = static_cast<std::size_t>(ps.label(i)) == j;
    auto table = binary_reliability_table(scores, positive, edges);
    table.mode = ReliabilityTable::Mode::Classwise;
    table.positive_class = j;
    return table;
}

}  // namespace calim
