#include "calim/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "calim/error.hpp"

namespace calim {

void softmax_inplace(std::span<double> scores) {
    const double top = *std::max_element(scores.begin(), scores.end());
    double total = 0.0;
    for (double& s : scores) {
        s = std::exp(s - top);
        total += s;
    }
    for (double& s : scores) s /= total;
}

std::vector<double> softmax(std::span<const double> scores) {
    std::vector<double> out(scores.begin(), scores.end());
    softmax_inplace(out);
    return out;
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < values.size(); ++j) {
        if (values[j] > values[best]) best = j;
    }
    return best;
}

std::vector<double> PredictionSet::class_column(std::size_t j) const {
    std::vector<double> col(size());
    for (std::size_t i = 0; i < size(); ++i) col[i] = probs_(i, j);
    return col;
}

namespace {

Matrix to_matrix(const Rows& rows, const char* what) {
    if (rows.empty()) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has no rows");
    const std::size_t cols = rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) {
            throw Error(ErrorCode::DimensionMismatch,
                        std::string(what) + " row " + std::to_string(i) + " has " +
                            std::to_string(rows[i].size()) + " entries, expected " + std::to_string(cols));
        }
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

void require_finite(const Matrix& m, const char* what) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j))) {
                throw Error(ErrorCode::NonFinite, std::string(what) + " entry (" + std::to_string(i) + ", " +
                                                      std::to_string(j) + ") is not finite");
            }
        }
    }
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix probs = logits;
    for (std::size_t i = 0; i < probs.rows(); ++i) softmax_inplace(probs.row(i));
    return probs;
}

void check_and_renormalize(Matrix& probs) {
    for (std::size_t i = 0; i < probs.rows(); ++i) {
        auto row = probs.row(i);
        double total = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] < -kRowSumTolerance || row[j] > 1.0 + kRowSumTolerance) {
                throw Error(ErrorCode::NotNormalized, "probability (" + std::to_string(i) + ", " +
                                                          std::to_string(j) + ") outside [0, 1]");
            }
            row[j] = std::clamp(row[j], 0.0, 1.0);
            total += row[j];
        }
        if (std::abs(total - 1.0) > kRowSumTolerance) {
            throw Error(ErrorCode::NotNormalized,
                        "probability row " + std::to_string(i) + " sums to " + std::to_string(total));
        }
        for (double& p : row) p /= total;
    }
}

}  // namespace

PredictionSet PredictionSet::build(std::optional<Matrix> logits, std::optional<Matrix> probs,
                                   std::vector<int> labels) {
    if (!logits && !probs) {
        throw Error(ErrorCode::DimensionMismatch, "neither logits nor probabilities were provided");
    }
    const Matrix& shape = logits ? *logits : *probs;
    const std::size_t n = shape.rows();
    const std::size_t k = shape.cols();
    if (n == 0) throw Error(ErrorCode::DimensionMismatch, "prediction set is empty");
    if (k < 2) throw Error(ErrorCode::TooFewClasses, "need at least 2 classes, got " + std::to_string(k));
    if (logits && probs && (probs->rows() != n || probs->cols() != k)) {
        throw Error(ErrorCode::DimensionMismatch, "logits and probabilities differ in shape");
    }
    if (labels.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, std::to_string(n) + " rows but " +
                                                      std::to_string(labels.size()) + " labels");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= k) {
            throw Error(ErrorCode::LabelOutOfRange,
                        "label of row " + std::to_string(i) + " is " + std::to_string(labels[i]) +
                            ", expected 0.." + std::to_string(k - 1));
        }
    }
    if (logits) require_finite(*logits, "logit");
    if (probs) require_finite(*probs, "probability");

    PredictionSet ps;
    if (probs) {
        check_and_renormalize(*probs);
        if (logits) {
            const Matrix expected = softmax_rows(*logits);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < k; ++j) {
                    if (std::abs(expected(i, j) - (*probs)(i, j)) > kSoftmaxConsistencyTolerance) {
                        throw Error(ErrorCode::NotNormalized,
                                    "probability row " + std::to_string(i) + " is not the softmax of its logits");
                    }
                }
            }
        }
        ps.probs_ = std::move(*probs);
    } else {
        ps.probs_ = softmax_rows(*logits);
    }
    ps.logits_ = std::move(logits);
    ps.labels_ = std::move(labels);
    return ps;
}

PredictionSet PredictionSet::from_logits(Matrix logits, std::vector<int> labels) {
    return build(std::move(logits), std::nullopt, std::move(labels));
}

PredictionSet PredictionSet::from_probs(Matrix probs, std::vector<int> labels) {
    return build(std::nullopt, std::move(probs), std::move(labels));
}

PredictionSet validate(const std::optional<Rows>& logits, const std::optional<Rows>& probs,
                       std::span<const int> labels) {
    std::optional<Matrix> lm;
    std::optional<Matrix> pm;
    if (logits) lm = to_matrix(*logits, "logit");
    if (probs) pm = to_matrix(*probs, "probability");
    return PredictionSet::build(std::move(lm), std::move(pm), std::vector<int>(labels.begin(), labels.end()));
}

TopLabelView top_label(const PredictionSet& ps) {
    TopLabelView view;
    view.pred.resize(ps.size());
    view.conf.resize(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto row = ps.prob_row(i);
        const std::size_t j = argmax(row);
        view.pred[i] = static_cast<int>(j);
        view.conf[i] = row[j];
    }
    return view;
}

std::string to_string(BinScheme scheme) {
    return scheme == BinScheme::EqualWidth ? "equal-width" : "equal-frequency";
}

BinScheme parse_bin_scheme(const std::string& text) {
    if (text == "equal-width") return BinScheme::EqualWidth;
    if (text == "equal-frequency") return BinScheme::EqualFrequency;
    throw Error(ErrorCode::ParseError, "unknown binning scheme '" + text + "'");
}

}  // namespace calim
