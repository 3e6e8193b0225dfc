#include "calim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "calim/error.hpp"

namespace calim {

double accuracy(const PredictionSet& ps) {
    const TopLabelView top = top_label(ps);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) correct += top.pred[i] == ps.label(i) ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(ps.size());
}

double ece(const ReliabilityTable& table) {
    double total = 0.0;
    for (std::size_t m = 0; m < table.bins.size(); ++m) {
        const auto& bin = table.bins[m];
        if (bin.count == 0) continue;
        total += table.weight(m) * std::abs(*bin.accuracy - *bin.confidence);
    }
    return total;
}

double mce(const ReliabilityTable& table) {
    bool any = false;
    double worst = 0.0;
    for (const auto& bin : table.bins) {
        if (bin.count == 0) continue;
        any = true;
        worst = std::max(worst, std::abs(*bin.accuracy - *bin.confidence));
    }
    if (!any) throw Error(ErrorCode::AllBinsEmpty, "reliability table has no populated bins");
    return worst;
}

double cwece(const PredictionSet& ps, const BinEdges& edges) {
    double total = 0.0;
    for (std::size_t j = 0; j < ps.num_classes(); ++j) {
        total += ece(classwise_reliability_table(ps, edges, j));
    }
    return total / static_cast<double>(ps.num_classes());
}

double cwece(const PredictionSet& ps, const BinningConfig& config) {
    if (config.scheme == BinScheme::EqualWidth) return cwece(ps, equal_width_edges(config.bins));
    double total = 0.0;
    for (std::size_t j = 0; j < ps.num_classes(); ++j) {
        const auto edges = equal_frequency_edges(ps.class_column(j), config.bins);
        total += ece(classwise_reliability_table(ps, edges, j));
    }
    return total / static_cast<double>(ps.num_classes());
}

double nll(const PredictionSet& ps) {
    double total = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        total -= std::log(std::max(ps.prob_row(i)[static_cast<std::size_t>(ps.label(i))], kLogClamp));
    }
    return total / static_cast<double>(ps.size());
}

double brier(const PredictionSet& ps) {
    double total = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto row = ps.prob_row(i);
        const auto y = static_cast<std::size_t>(ps.label(i));
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double d = row[j] - (j == y ? 1.0 : 0.0);
            total += d * d;
        }
    }
    return total / static_cast<double>(ps.size());
}

MetricsReport report(const PredictionSet& ps, const BinningConfig& config) {
    const TopLabelView top = top_label(ps);
    const BinEdges edges = make_edges(config, top.conf);
    const ReliabilityTable table = reliability_table(ps, edges);

    MetricsReport out;
    out.bins = config.bins;
    out.scheme = config.scheme;
    out.values["accuracy"] = accuracy(ps);
    out.values["ece"] = ece(table);
    out.values["mce"] = mce(table);
    out.values["cwece"] = cwece(ps, config);
    out.values["nll"] = nll(ps);
    out.values["brier"] = brier(ps);
    return out;
}

}  // namespace calim
