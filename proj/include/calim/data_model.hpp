#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "calim/matrix.hpp"

namespace calim {

// Ragged input as it arrives from a parser; validated into a Matrix.
using Rows = std::vector<std::vector<double>>;

inline constexpr double kRowSumTolerance = 1e-6;
inline constexpr double kSoftmaxConsistencyTolerance = 1e-9;

// Numerically stable softmax of a single score vector.
std::vector<double> softmax(std::span<const double> scores);
void softmax_inplace(std::span<double> scores);

// Index of the largest entry; ties resolve to the lowest index.
std::size_t argmax(std::span<const double> values);

/// Validated model outputs for n objects over K classes.
///
/// Labels are 0-based class indices. Probability rows are renormalized to sum
/// to exactly 1 after validation. Logits are optional; when present, probs are
/// their row-wise softmax.
class PredictionSet {
public:
    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] std::size_t num_classes() const noexcept { return probs_.cols(); }

    [[nodiscard]] const Matrix& probs() const noexcept { return probs_; }
    [[nodiscard]] const std::optional<Matrix>& logits() const noexcept { return logits_; }
    [[nodiscard]] bool has_logits() const noexcept { return logits_.has_value(); }
    [[nodiscard]] std::span<const int> labels() const noexcept { return labels_; }

    [[nodiscard]] std::span<const double> prob_row(std::size_t i) const { return probs_.row(i); }
    [[nodiscard]] std::span<const double> logit_row(std::size_t i) const { return logits_->row(i); }
    [[nodiscard]] int label(std::size_t i) const { return labels_[i]; }

    /// Probability of class j for every object (column j of probs).
    [[nodiscard]] std::vector<double> class_column(std::size_t j) const;

    static PredictionSet from_logits(Matrix logits, std::vector<int> labels);
    static PredictionSet from_probs(Matrix probs, std::vector<int> labels);

    friend PredictionSet validate(const std::optional<Rows>& logits, const std::optional<Rows>& probs,
                                  std::span<const int> labels);

private:
    PredictionSet() = default;
    static PredictionSet build(std::optional<Matrix> logits, std::optional<Matrix> probs,
                               std::vector<int> labels);

    std::optional<Matrix> logits_;
    Matrix probs_;
    std::vector<int> labels_;
};

/// Checks raw model outputs and builds a PredictionSet.
///
/// At least one of logits/probs must be given. If only logits are given the
/// probabilities are their softmax; if only probs are given logits stay absent.
/// Throws Error with DimensionMismatch, LabelOutOfRange, NonFinite,
/// NotNormalized or TooFewClasses.
PredictionSet validate(const std::optional<Rows>& logits, const std::optional<Rows>& probs,
                       std::span<const int> labels);

struct TopLabelView {
    std::vector<int> pred;
    std::vector<double> conf;
};

TopLabelView top_label(const PredictionSet& ps);

enum class BinScheme { EqualWidth, EqualFrequency };

std::string to_string(BinScheme scheme);
BinScheme parse_bin_scheme(const std::string& text);

struct MetricsReport {
    std::map<std::string, double> values;  // accuracy, ece, mce, cwece, nll, brier
    std::size_t bins = 0;
    BinScheme scheme = BinScheme::EqualWidth;

    [[nodiscard]] double at(const std::string& name) const { return values.at(name); }
};

}  // namespace calim
