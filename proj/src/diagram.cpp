#include "calim/diagram.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "calim/metrics.hpp"

namespace calim {

nlohmann::json diagram_to_json(const ReliabilityTable& table) {
    nlohmann::json doc;
    const bool classwise = table.mode == ReliabilityTable::Mode::Classwise;
    doc["mode"] = classwise ? "classwise" : "top-label";
    if (classwise) doc["class"] = table.positive_class + 1;
    doc["M"] = table.edges.count();
    doc["scheme"] = to_string(table.edges.scheme);
    nlohmann::json bins = nlohmann::json::array();
    for (std::size_t m = 0; m < table.bins.size(); ++m) {
        const auto& bin = table.bins[m];
        nlohmann::json entry = {{"lower", bin.lower}, {"upper", bin.upper}, {"count", bin.count},
                                {"weight", table.weight(m)}};
        if (bin.count > 0) {
            entry["accuracy"] = *bin.accuracy;
            entry["confidence"] = *bin.confidence;
        }
        bins.push_back(std::move(entry));
    }
    doc["bins"] = std::move(bins);
    doc["n"] = table.total;
    doc["ece"] = ece(table);
    doc["mce"] = mce(table);
    return doc;
}

namespace {

constexpr double kPanelWidth = 420.0;
constexpr double kPanelHeight = 470.0;
constexpr double kPlotSize = 340.0;
constexpr double kMarginLeft = 55.0;
constexpr double kMarginTop = 35.0;
constexpr double kWeightStrip = 50.0;
constexpr const char* kConfidenceColor = "#d62728";
constexpr const char* kAccuracyColor = "#1f77b4";

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void rect(std::ostringstream& out, double x, double y, double w, double h, const char* fill,
          const char* extra = "") {
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(std::max(w, 0.0))
        << "\" height=\"" << num(std::max(h, 0.0)) << "\" fill=\"" << fill << "\"" << extra << "/>\n";
}

void line(std::ostringstream& out, double x1, double y1, double x2, double y2, const char* stroke,
          const char* extra = "") {
    out << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
        << "\" stroke=\"" << stroke << "\"" << extra << "/>\n";
}

void text(std::ostringstream& out, double x, double y, const std::string& body, const char* anchor = "middle",
          int size = 11) {
    out << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << body << "</text>\n";
}

void panel(std::ostringstream& out, const ReliabilityTable& table, double ox, double oy) {
    const double left = ox + kMarginLeft;
    const double top = oy + kMarginTop;
    const double bottom = top + kPlotSize;
    auto px = [&](double v) { return left + v * kPlotSize; };
    auto py = [&](double v) { return bottom - v * kPlotSize; };

    std::string title = table.mode == ReliabilityTable::Mode::Classwise
                            ? "Class " + std::to_string(table.positive_class + 1)
                            : std::string("Top-label");
    char buf[96];
    std::snprintf(buf, sizeof buf, " (n=%zu, ECE %.2f%%)", table.total, 100.0 * ece(table));
    text(out, left + kPlotSize / 2, oy + 20, title + buf, "middle", 13);

    rect(out, left, top, kPlotSize, kPlotSize, "none", " stroke=\"#333\"");
    for (int t = 0; t <= 4; ++t) {
        const double v = t / 4.0;
        line(out, px(v), bottom, px(v), bottom + 4, "#333");
        text(out, px(v), bottom + 15, num(v), "middle", 10);
        line(out, left - 4, py(v), left, py(v), "#333");
        text(out, left - 7, py(v) + 3, num(v), "end", 10);
    }

    for (std::size_t m = 0; m < table.bins.size(); ++m) {
        const auto& bin = table.bins[m];
        if (bin.count == 0) continue;
        const double x0 = px(bin.lower);
        const double width = px(bin.upper) - x0;
        const double half = width / 2.0;
        rect(out, x0 + 1, py(*bin.confidence), half - 1, bottom - py(*bin.confidence), kConfidenceColor,
             " fill-opacity=\"0.8\"");
        rect(out, x0 + half, py(*bin.accuracy), half - 1, bottom - py(*bin.accuracy), kAccuracyColor,
             " fill-opacity=\"0.8\"");
    }
    line(out, px(0), py(0), px(1), py(1), "#555", " stroke-dasharray=\"5,4\"");

    // Weight strip: bar height is the fraction of objects in the bin.
    const double strip_top = bottom + 25;
    rect(out, left, strip_top, kPlotSize, kWeightStrip, "none", " stroke=\"#999\"");
    for (std::size_t m = 0; m < table.bins.size(); ++m) {
        const double w = table.weight(m);
        const double x0 = px(table.bins[m].lower);
        const double width = px(table.bins[m].upper) - x0;
        rect(out, x0 + 1, strip_top + kWeightStrip * (1.0 - w), width - 2, kWeightStrip * w, "#7f7f7f");
    }
    text(out, left - 7, strip_top + kWeightStrip / 2 + 3, "weight", "end", 10);

    const double legend_y = oy + kPanelHeight - 10;
    rect(out, left, legend_y - 9, 10, 10, kConfidenceColor);
    text(out, left + 14, legend_y, "confidence", "start", 10);
    rect(out, left + 90, legend_y - 9, 10, 10, kAccuracyColor);
    text(out, left + 104, legend_y, table.mode == ReliabilityTable::Mode::Classwise ? "positive rate" : "accuracy",
         "start", 10);
}

}  // namespace

std::string render_svg(std::span<const ReliabilityTable> tables) {
    const std::size_t columns = std::min<std::size_t>(std::max<std::size_t>(tables.size(), 1), 4);
    const std::size_t rows = (tables.size() + columns - 1) / columns;
    const double width = kPanelWidth * static_cast<double>(columns);
    const double height = kPanelHeight * static_cast<double>(std::max<std::size_t>(rows, 1));

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
    rect(out, 0, 0, width, height, "white");
    for (std::size_t t = 0; t < tables.size(); ++t) {
        const double ox = kPanelWidth * static_cast<double>(t % columns);
        const double oy = kPanelHeight * static_cast<double>(t / columns);
        panel(out, tables[t], ox, oy);
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace calim
