#include "calim/serialization.hpp"

#include <cmath>

#include <json.hpp>

#include "calim/error.hpp"

namespace calim {

using nlohmann::json;

namespace {

json histogram_params(const HistogramMap& map) {
    json classes = json::array();
    for (std::size_t j = 0; j < map.num_classes(); ++j) {
        classes.push_back({{"edges", map.edges[j].edges}, {"theta", map.theta[j]}});
    }
    const BinScheme scheme = map.edges.empty() ? BinScheme::EqualWidth : map.edges.front().scheme;
    return {{"scheme", to_string(scheme)}, {"classes", std::move(classes)}};
}

json isotonic_params(const IsotonicMap& map) {
    json classes = json::array();
    for (std::size_t j = 0; j < map.num_classes(); ++j) {
        classes.push_back({{"breakpoints", map.breakpoints[j]}, {"levels", map.levels[j]}});
    }
    return {{"classes", std::move(classes)}};
}

json linear_params(const LinearLogitMap& map) {
    json params = json::object();
    switch (map.mode) {
        case LinearMode::Temperature:
            params["temperature"] = map.temperature;
            break;
        case LinearMode::Vector:
        case LinearMode::VectorBias:
            params["scale"] = map.scale;
            break;
        case LinearMode::MatrixBias: {
            json rows = json::array();
            for (std::size_t r = 0; r < map.classes; ++r) {
                const auto row = map.weights.row(r);
                rows.push_back(std::vector<double>(row.begin(), row.end()));
            }
            params["weights"] = std::move(rows);
            break;
        }
    }
    if (map.mode == LinearMode::VectorBias || map.mode == LinearMode::MatrixBias) params["bias"] = map.bias;
    return params;
}

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, "calibration map: " + what); }

void require(bool ok, const std::string& what) {
    if (!ok) fail(what);
}

std::vector<double> real_vector(const json& node, std::size_t expected, const std::string& what) {
    require(node.is_array(), what + " must be an array");
    auto values = node.get<std::vector<double>>();
    require(values.size() == expected, what + " has " + std::to_string(values.size()) + " entries, expected " +
                                           std::to_string(expected));
    for (double v : values) require(std::isfinite(v), what + " contains a non-finite value");
    return values;
}

HistogramMap parse_histogram(const json& params, std::size_t k) {
    const BinScheme scheme = parse_bin_scheme(params.at("scheme").get<std::string>());
    const json& classes = params.at("classes");
    require(classes.is_array() && classes.size() == k, "histogram needs one entry per class");
    HistogramMap map;
    for (const json& entry : classes) {
        BinEdges edges;
        edges.scheme = scheme;
        edges.edges = entry.at("edges").get<std::vector<double>>();
        require(edges.edges.size() >= 2 && edges.edges.front() == 0.0 && edges.edges.back() == 1.0,
                "histogram edges must run from 0 to 1");
        require(std::is_sorted(edges.edges.begin(), edges.edges.end()), "histogram edges must be sorted");
        auto theta = real_vector(entry.at("theta"), edges.count(), "theta");
        for (double t : theta) require(t >= 0.0 && t <= 1.0, "theta outside [0, 1]");
        map.edges.push_back(std::move(edges));
        map.theta.push_back(std::move(theta));
    }
    return map;
}

IsotonicMap parse_isotonic(const json& params, std::size_t k) {
    const json& classes = params.at("classes");
    require(classes.is_array() && classes.size() == k, "isotonic needs one entry per class");
    IsotonicMap map;
    for (const json& entry : classes) {
        auto alpha = entry.at("breakpoints").get<std::vector<double>>();
        require(alpha.size() >= 2 && alpha.front() == 0.0 && alpha.back() == 1.0,
                "isotonic breakpoints must run from 0 to 1");
        require(std::is_sorted(alpha.begin(), alpha.end()), "isotonic breakpoints must be sorted");
        auto levels = real_vector(entry.at("levels"), alpha.size() - 1, "levels");
        require(std::is_sorted(levels.begin(), levels.end()), "isotonic levels must be nondecreasing");
        for (double t : levels) require(t >= 0.0 && t <= 1.0, "level outside [0, 1]");
        map.breakpoints.push_back(std::move(alpha));
        map.levels.push_back(std::move(levels));
    }
    return map;
}

LinearLogitMap parse_linear(const json& params, LinearMode mode, std::size_t k) {
    LinearLogitMap map = LinearLogitMap::identity(mode, k);
    switch (mode) {
        case LinearMode::Temperature:
            map.temperature = params.at("temperature").get<double>();
            require(std::isfinite(map.temperature) && map.temperature > 0.0, "temperature must be positive");
            break;
        case LinearMode::Vector:
        case LinearMode::VectorBias:
            map.scale = real_vector(params.at("scale"), k, "scale");
            break;
        case LinearMode::MatrixBias: {
            const json& rows = params.at("weights");
            require(rows.is_array() && rows.size() == k, "weights must have K rows");
            for (std::size_t r = 0; r < k; ++r) {
                const auto row = real_vector(rows[r], k, "weights row");
                std::copy(row.begin(), row.end(), map.weights.row(r).begin());
            }
            break;
        }
    }
    if (mode == LinearMode::VectorBias || mode == LinearMode::MatrixBias) {
        map.bias = real_vector(params.at("bias"), k, "bias");
    }
    return map;
}

}  // namespace

std::string serialize_map(const CalibrationMap& map) {
    json doc;
    doc["version"] = kMapFormatVersion;
    doc["method"] = method_name(map);
    doc["K"] = num_classes(map);
    doc["params"] = std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HistogramMap>) {
                return histogram_params(m);
            } else if constexpr (std::is_same_v<T, IsotonicMap>) {
                return isotonic_params(m);
            } else {
                return linear_params(m);
            }
        },
        map);
    return doc.dump(2) + "\n";
}

CalibrationMap parse_map(std::string_view text) {
    try {
        const json doc = json::parse(text);
        const int version = doc.at("version").get<int>();
        require(version == kMapFormatVersion, "unsupported version " + std::to_string(version));
        const std::string method = doc.at("method").get<std::string>();
        const auto k = doc.at("K").get<std::size_t>();
        require(k >= 2, "K must be at least 2");
        const json& params = doc.at("params");
        if (method == "histogram") return parse_histogram(params, k);
        if (method == "isotonic") return parse_isotonic(params, k);
        return parse_linear(params, parse_linear_mode(method), k);
    } catch (const json::exception& e) {
        fail(e.what());
    }
}

}  // namespace calim
