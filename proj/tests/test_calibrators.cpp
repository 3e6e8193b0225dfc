#include <doctest.h>

#include <cmath>
#include <random>

#include "calim/calibrators.hpp"
#include "calim/error.hpp"
#include "calim/synthetic.hpp"
#include "helpers.hpp"

using namespace calim;
using testing_helpers::probs_set;

TEST_CASE("histogram binning: theta is the positive fraction per bin") {
    // Class-0 confidences 0.7, 0.8, 0.9 share one bin of M=2; labels {+,+,-}.
    const auto calib = probs_set({{0.7, 0.3}, {0.8, 0.2}, {0.9, 0.1}}, {1, 1, 2});
    const auto map = fit_histogram_binning(calib, {2, BinScheme::EqualWidth});
    REQUIRE(map.num_classes() == 2);
    CHECK(map.theta[0][1] == doctest::Approx(2.0 / 3.0));
    CHECK(map.theta[1][0] == doctest::Approx(1.0 / 3.0));
    // Empty bins fall back to the bin midpoint.
    CHECK(map.theta[0][0] == doctest::Approx(0.25));
    CHECK(map.theta[1][1] == doctest::Approx(0.75));

    // One-vs-rest evaluation then normalization: (2/3, 1/3) already sums to 1.
    const auto out = apply_nonparametric(map, probs_set({{0.75, 0.25}}, {1}));
    CHECK(out.prob_row(0)[0] == doctest::Approx(2.0 / 3.0));
    CHECK(out.prob_row(0)[1] == doctest::Approx(1.0 / 3.0));
    CHECK_FALSE(out.has_logits());
}

TEST_CASE("histogram binning defaults to 20 equal-width bins") {
    const auto calib = probs_set({{0.7, 0.3}, {0.2, 0.8}}, {1, 2});
    const auto map = fit_histogram_binning(calib);
    CHECK(map.edges[0].count() == 20);
    CHECK(map.edges[0].scheme == BinScheme::EqualWidth);
    CHECK_THROWS_AS(fit_histogram_binning(calib, {0, BinScheme::EqualWidth}), Error);
}

TEST_CASE("histogram binning with midpoint thetas acts like the identity") {
    HistogramMap map;
    for (int j = 0; j < 2; ++j) {
        map.edges.push_back(equal_width_edges(4));
        map.theta.push_back({0.125, 0.375, 0.625, 0.875});
    }
    const auto out = apply_nonparametric(map, probs_set({{0.125, 0.875}, {0.375, 0.625}}, {1, 2}));
    CHECK(out.prob_row(0)[0] == doctest::Approx(0.125));
    CHECK(out.prob_row(1)[1] == doctest::Approx(0.625));
}

TEST_CASE("property: histogram theta minimizes in-bin squared loss (grid search)") {
    SynthConfig cfg;
    cfg.n = 400;
    cfg.classes = 3;
    cfg.distortion = 2.0;
    cfg.seed = 4;
    const auto calib = generate(cfg);
    for (auto scheme : {BinScheme::EqualWidth, BinScheme::EqualFrequency}) {
        const auto map = fit_histogram_binning(calib, {10, scheme});
        for (std::size_t j = 0; j < 3; ++j) {
            const auto& edges = map.edges[j];
            for (std::size_t m = 0; m < edges.count(); ++m) {
                std::vector<double> ys;
                for (std::size_t i = 0; i < calib.size(); ++i) {
                    if (assign_bin(calib.prob_row(i)[j], edges) == m) {
                        ys.push_back(static_cast<std::size_t>(calib.label(i)) == j ? 1.0 : 0.0);
                    }
                }
                if (ys.empty()) continue;
                auto loss = [&](double t) {
                    double s = 0.0;
                    for (double y : ys) s += (t - y) * (t - y);
                    return s;
                };
                const double fitted = loss(map.theta[j][m]);
                for (int g = 0; g <= 100; ++g) CHECK(fitted <= loss(g / 100.0) + 1e-12);
            }
        }
    }
}

TEST_CASE("isotonic fit on small binary sets") {
    // Class-1 confidences 0.1, 0.4, 0.9 with indicators 0, 1, 1.
    const auto calib = probs_set({{0.9, 0.1}, {0.6, 0.4}, {0.1, 0.9}}, {1, 2, 2});
    const auto map = fit_isotonic(calib);
    CHECK(map.levels[1] == std::vector<double>{0.0, 1.0});
    CHECK(map.breakpoints[1] == std::vector<double>{0.0, 0.25, 1.0});
    CHECK(map.evaluate(1, 0.0) == 0.0);
    CHECK(map.evaluate(1, 0.2) == 0.0);
    CHECK(map.evaluate(1, 0.25) == 1.0);
    CHECK(map.evaluate(1, 1.0) == 1.0);

    const auto all_pos = fit_isotonic(probs_set({{0.3, 0.7}, {0.2, 0.8}}, {2, 2}));
    CHECK(all_pos.levels[1] == std::vector<double>{1.0});
    CHECK(all_pos.evaluate(1, 0.05) == 1.0);

    // Sorted indicators [1, 0] pool into a constant 0.5.
    const auto pooled = fit_isotonic(probs_set({{0.8, 0.2}, {0.4, 0.6}}, {2, 1}));
    CHECK(pooled.levels[1] == std::vector<double>{0.5});
}

TEST_CASE("isotonic pools tied confidences before fitting") {
    const auto calib = probs_set({{0.5, 0.5}, {0.5, 0.5}, {0.2, 0.8}}, {1, 2, 2});
    const auto map = fit_isotonic(calib);
    CHECK(map.evaluate(1, 0.5) == doctest::Approx(0.5));
    CHECK(map.evaluate(1, 0.8) == 1.0);
}

TEST_CASE("property: isotonic maps are nondecreasing on a 1000-point grid") {
    SynthConfig cfg;
    cfg.n = 2000;
    cfg.classes = 5;
    cfg.distortion = 2.5;
    cfg.seed = 21;
    const auto map = fit_isotonic(generate(cfg));
    for (std::size_t j = 0; j < 5; ++j) {
        double prev = map.evaluate(j, 0.0);
        for (int g = 1; g <= 1000; ++g) {
            const double v = map.evaluate(j, g / 1000.0);
            CHECK(v >= prev);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            prev = v;
        }
    }
}

TEST_CASE("nonparametric maps fall back to uniform rows and check K") {
    HistogramMap zero;
    for (int j = 0; j < 3; ++j) {
        zero.edges.push_back(equal_width_edges(1));
        zero.theta.push_back({0.0});
    }
    const auto out = apply_nonparametric(zero, probs_set({{0.2, 0.3, 0.5}}, {1}));
    for (double p : out.prob_row(0)) CHECK(p == doctest::Approx(1.0 / 3.0));

    CHECK_THROWS_AS(apply_nonparametric(zero, probs_set({{0.2, 0.8}}, {1})), Error);
    CHECK_THROWS_AS(apply_map(CalibrationMap{zero}, probs_set({{0.2, 0.8}}, {1})), Error);
}

TEST_CASE("property: every fitted map yields valid distributions") {
    SynthConfig cfg;
    cfg.n = 600;
    cfg.classes = 4;
    cfg.distortion = 3.0;
    cfg.seed = 8;
    const auto calib = generate(cfg);
    cfg.seed = 9;
    const auto test = generate(cfg);
    std::vector<CalibrationMap> maps{fit_histogram_binning(calib), fit_isotonic(calib),
                                     fit_histogram_binning(calib, {20, BinScheme::EqualFrequency})};
    for (auto mode : {LinearMode::Temperature, LinearMode::Vector, LinearMode::VectorBias, LinearMode::MatrixBias}) {
        maps.push_back(fit_linear_scaling(calib, mode).first);
    }
    for (const auto& map : maps) {
        const auto out = apply_map(map, test);
        for (std::size_t i = 0; i < out.size(); ++i) {
            double total = 0.0;
            for (double p : out.prob_row(i)) {
                CHECK(p >= 0.0);
                total += p;
            }
            CHECK(std::abs(total - 1.0) < 1e-9);
        }
    }
}
