#include "calim/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "calim/error.hpp"

namespace calim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

[[noreturn]] void fail_at(std::size_t row, const std::string& column, const std::string& why) {
    throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ", column '" + column + "': " + why);
}

struct Header {
    std::size_t classes = 0;
    bool logits = false;
    bool probs = false;
    std::vector<std::string> names;
};

// Accepts [logit_0..logit_{K-1}] [prob_0..prob_{K-1}] label, at least one family.
Header parse_header(std::string_view line) {
    Header h;
    const auto cells = split(line);
    for (auto c : cells) h.names.emplace_back(c);
    if (h.names.empty() || h.names.back() != "label") {
        throw Error(ErrorCode::ParseError, "header: last column must be 'label'");
    }
    std::size_t pos = 0;
    auto take_family = [&](const std::string& prefix) {
        std::size_t count = 0;
        while (pos + 1 < h.names.size() && h.names[pos] == prefix + std::to_string(count)) {
            ++count;
            ++pos;
        }
        return count;
    };
    const std::size_t logit_count = take_family("logit_");
    const std::size_t prob_count = take_family("prob_");
    if (pos + 1 != h.names.size()) {
        throw Error(ErrorCode::ParseError, "header: unexpected column '" + h.names[pos] + "'");
    }
    if (logit_count == 0 && prob_count == 0) {
        throw Error(ErrorCode::ParseError, "header: no logit_* or prob_* columns");
    }
    if (logit_count != 0 && prob_count != 0 && logit_count != prob_count) {
        throw Error(ErrorCode::ParseError, "header: logit_* and prob_* column counts differ");
    }
    h.logits = logit_count > 0;
    h.probs = prob_count > 0;
    h.classes = h.logits ? logit_count : prob_count;
    return h;
}

double parse_real(std::string_view cell, std::size_t row, const std::string& column) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        fail_at(row, column, "'" + std::string(cell) + "' is not a decimal number");
    }
    if (!std::isfinite(value)) fail_at(row, column, "value is not finite");
    return value;
}

int parse_label(std::string_view cell, std::size_t row, std::size_t classes) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        fail_at(row, "label", "'" + std::string(cell) + "' is not an integer");
    }
    if (value < 1 || value > static_cast<long long>(classes)) {
        fail_at(row, "label", "label " + std::to_string(value) + " outside 1.." + std::to_string(classes));
    }
    return static_cast<int>(value - 1);
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

PredictionSet read_predictions_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "input is empty");
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    const Header header = parse_header(line);
    const std::size_t k = header.classes;

    std::optional<Rows> logits;
    std::optional<Rows> probs;
    if (header.logits) logits.emplace();
    if (header.probs) probs.emplace();
    std::vector<int> labels;

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto cells = split(line);
        if (cells.size() != header.names.size()) {
            fail_at(row, cells.size() < header.names.size() ? header.names[cells.size()] : "label",
                    "expected " + std::to_string(header.names.size()) + " columns, found " +
                        std::to_string(cells.size()));
        }
        std::size_t col = 0;
        if (logits) {
            auto& r = logits->emplace_back(k);
            for (std::size_t j = 0; j < k; ++j, ++col) r[j] = parse_real(cells[col], row, header.names[col]);
        }
        if (probs) {
            auto& r = probs->emplace_back(k);
            double total = 0.0;
            for (std::size_t j = 0; j < k; ++j, ++col) {
                r[j] = parse_real(cells[col], row, header.names[col]);
                if (r[j] < -kRowSumTolerance || r[j] > 1.0 + kRowSumTolerance) {
                    fail_at(row, header.names[col], "probability outside [0, 1]");
                }
                total += r[j];
            }
            if (std::abs(total - 1.0) > kRowSumTolerance) {
                fail_at(row, "prob_*", "probabilities sum to " + format_real(total));
            }
        }
        labels.push_back(parse_label(cells[col], row, k));
    }
    if (labels.empty()) throw Error(ErrorCode::ParseError, "no data rows");
    return validate(logits, probs, labels);
}

PredictionSet read_predictions_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    return read_predictions_csv(in);
}

ColumnFamily natural_columns(const PredictionSet& ps) {
    return ps.has_logits() ? ColumnFamily::Logits : ColumnFamily::Probs;
}

void write_predictions_csv(std::ostream& out, const PredictionSet& ps, ColumnFamily columns) {
    const bool logits = columns != ColumnFamily::Probs;
    const bool probs = columns != ColumnFamily::Logits;
    if (logits && !ps.has_logits()) throw Error(ErrorCode::MissingLogits, "prediction set has no logits to write");
    const std::size_t k = ps.num_classes();

    std::string line;
    if (logits) {
        for (std::size_t j = 0; j < k; ++j) line += "logit_" + std::to_string(j) + ",";
    }
    if (probs) {
        for (std::size_t j = 0; j < k; ++j) line += "prob_" + std::to_string(j) + ",";
    }
    out << line << "label\n";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        line.clear();
        if (logits) {
            for (double v : ps.logit_row(i)) line += format_real(v) + ",";
        }
        if (probs) {
            for (double v : ps.prob_row(i)) line += format_real(v) + ",";
        }
        out << line << ps.label(i) + 1 << '\n';
    }
}

void write_predictions_file(const std::string& path, const PredictionSet& ps, ColumnFamily columns) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
    write_predictions_csv(out, ps, columns);
    if (!out) throw Error(ErrorCode::ParseError, "failed writing '" + path + "'");
}

}  // namespace calim
