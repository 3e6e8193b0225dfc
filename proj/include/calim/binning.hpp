#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "calim/data_model.hpp"

namespace calim {

/// Ordered partition of [0, 1]. Bin m (0-based) is [edges[m], edges[m+1]),
/// except the last bin which is closed: [edges[M-1], 1].
struct BinEdges {
    std::vector<double> edges;
    BinScheme scheme = BinScheme::EqualWidth;

    [[nodiscard]] std::size_t count() const noexcept { return edges.size() - 1; }
    [[nodiscard]] double lower(std::size_t m) const { return edges[m]; }
    [[nodiscard]] double upper(std::size_t m) const { return edges[m + 1]; }
    [[nodiscard]] double midpoint(std::size_t m) const { return 0.5 * (edges[m] + edges[m + 1]); }

    friend bool operator==(const BinEdges&, const BinEdges&) = default;
};

struct BinningConfig {
    std::size_t bins = 15;
    BinScheme scheme = BinScheme::EqualWidth;
};

BinEdges equal_width_edges(std::size_t bins);

/// Edges at the i/M empirical quantiles. Each cut sits at the midpoint of the
/// two order statistics straddling it; a cut that falls inside a run of tied
/// values is dropped, so M may shrink and no bin is left empty.
BinEdges equal_frequency_edges(std::span<const double> confidences, std::size_t bins);

/// Builds edges for `config`; `confidences` is only read for equal-frequency.
BinEdges make_edges(const BinningConfig& config, std::span<const double> confidences);

/// 0-based bin index of p. Throws OutOfRange unless 0 <= p <= 1.
std::size_t assign_bin(double p, const BinEdges& edges);

struct ReliabilityBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
    std::optional<double> accuracy;    // empty when count == 0
    std::optional<double> confidence;  // empty when count == 0
};

struct ReliabilityTable {
    enum class Mode { TopLabel, Classwise };

    Mode mode = Mode::TopLabel;
    std::size_t positive_class = 0;  // meaningful in classwise mode only
    std::size_t total = 0;
    BinEdges edges;
    std::vector<ReliabilityBin> bins;

    [[nodiscard]] double weight(std::size_t m) const {
        return static_cast<double>(bins[m].count) / static_cast<double>(total);
    }
};

/// Top-label table: bins by the predicted-class confidence; accuracy is the
/// fraction of correct predictions.
ReliabilityTable reliability_table(const PredictionSet& ps, const BinEdges& edges);

/// One-vs-rest table for class j: bins every object by its confidence in j;
/// accuracy is the fraction whose label is j.
ReliabilityTable classwise_reliability_table(const PredictionSet& ps, const BinEdges& edges, std::size_t j);

/// Generic binary table over (score, hit) pairs. Used by both modes above.
ReliabilityTable binary_reliability_table(std::span<const double> scores, const std::vector<bool>& hits,
                                          const BinEdges& edges);

}  // namespace calim
