#include <doctest.h>

#include "calim/diagram.hpp"
#include "calim/synthetic.hpp"
#include "helpers.hpp"

using namespace calim;

TEST_CASE("diagram document layout") {
    const auto ps = testing_helpers::probs_set({{0.6, 0.4}, {0.9, 0.1}, {0.3, 0.7}}, {1, 2, 2});
    const auto doc = diagram_to_json(reliability_table(ps, equal_width_edges(10)));
    CHECK(doc["mode"] == "top-label");
    CHECK_FALSE(doc.contains("class"));
    CHECK(doc["M"] == 10);
    CHECK(doc["scheme"] == "equal-width");
    CHECK(doc["n"] == 3);
    REQUIRE(doc["bins"].size() == 10);
    double weights = 0.0;
    for (const auto& bin : doc["bins"]) {
        weights += bin["weight"].get<double>();
        CHECK(bin.contains("accuracy") == (bin["count"].get<int>() > 0));
        CHECK(bin.contains("confidence") == (bin["count"].get<int>() > 0));
    }
    CHECK(weights == doctest::Approx(1.0).epsilon(1e-12));

    const auto cw = diagram_to_json(classwise_reliability_table(ps, equal_width_edges(10), 1));
    CHECK(cw["mode"] == "classwise");
    CHECK(cw["class"] == 2);
}

TEST_CASE("binary top-label diagrams leave bins below 0.5 empty") {
    SynthConfig cfg;
    cfg.n = 2000;
    cfg.classes = 2;
    cfg.seed = 6;
    const auto doc = diagram_to_json(reliability_table(generate(cfg), equal_width_edges(10)));
    for (int m = 0; m < 5; ++m) CHECK(doc["bins"][m]["count"] == 0);
}

TEST_CASE("svg contains bars, diagonal and one panel per table") {
    SynthConfig cfg;
    cfg.n = 500;
    cfg.classes = 3;
    cfg.distortion = 2.0;
    const auto ps = generate(cfg);
    std::vector<ReliabilityTable> tables{reliability_table(ps, equal_width_edges(10))};
    const auto one = render_svg(tables);
    CHECK(one.starts_with("<svg"));
    CHECK(one.find("#d62728") != std::string::npos);
    CHECK(one.find("#1f77b4") != std::string::npos);
    CHECK(one.find("stroke-dasharray") != std::string::npos);
    CHECK(one.find("</svg>") != std::string::npos);

    for (std::size_t j = 0; j < 3; ++j) tables.push_back(classwise_reliability_table(ps, equal_width_edges(10), j));
    const auto many = render_svg(tables);
    std::size_t titles = 0;
    for (auto pos = many.find("ECE "); pos != std::string::npos; pos = many.find("ECE ", pos + 1)) ++titles;
    CHECK(titles == 4);
}
