#include <doctest.h>

#include <cmath>
#include <random>

#include "calim/calibrators.hpp"
#include "calim/error.hpp"
#include "calim/metrics.hpp"
#include "calim/optimize.hpp"
#include "calim/synthetic.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace calim;

namespace {

LinearLogitMap temperature_map(double t, std::size_t k) {
    auto map = LinearLogitMap::identity(LinearMode::Temperature, k);
    map.temperature = t;
    return map;
}

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("scale_logits closed forms") {
    const std::vector<double> z{std::log(2.0), 0.0};
    const auto p = scale_logits(z, temperature_map(1.0, 2));
    CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    const std::vector<double> z2{2.0 * std::log(2.0), 0.0};
    const auto q = scale_logits(z2, temperature_map(2.0, 2));
    CHECK(q[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    const std::vector<double> wide{5.0, -3.0, 1.0};
    const auto hot = scale_logits(wide, temperature_map(1e6, 3));
    for (double x : hot) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-5));

    const std::vector<double> bad{NAN, 0.0};
    CHECK_THROWS_AS(scale_logits(bad, temperature_map(1.0, 2)), Error);
}

TEST_CASE("raising the temperature raises output entropy") {
    const std::vector<double> z{3.0, 1.0, -2.0, 0.5};
    double prev = -1.0;
    for (double t : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const auto p = scale_logits(z, temperature_map(t, 4));
        double h = 0.0;
        for (double x : p) h -= x * std::log(x);
        CHECK(h > prev);
        prev = h;
    }
}

TEST_CASE("parameter round trip through the optimizer layout") {
    auto map = LinearLogitMap::identity(LinearMode::MatrixBias, 3);
    map.weights(0, 2) = 0.5;
    map.bias[1] = -1.25;
    const auto back = LinearLogitMap::from_parameters(LinearMode::MatrixBias, 3, map.parameters());
    CHECK(back.weights == map.weights);
    CHECK(back.bias == map.bias);
    CHECK(LinearLogitMap::parameter_count(LinearMode::Temperature, 5) == 1);
    CHECK(LinearLogitMap::parameter_count(LinearMode::Vector, 5) == 5);
    CHECK(LinearLogitMap::parameter_count(LinearMode::VectorBias, 5) == 10);
    CHECK(LinearLogitMap::parameter_count(LinearMode::MatrixBias, 5) == 30);
}

TEST_CASE("temperature gradient vanishes on symmetric logits") {
    Matrix logits(1, 2);
    const std::vector<int> labels{0};
    const std::vector<double> params{0.0};
    const auto v = nll_objective_grad(params, logits, labels, LinearMode::Temperature);
    CHECK(v.value == doctest::Approx(std::log(2.0)));
    CHECK(v.gradient[0] == 0.0);
}

TEST_CASE("property: analytic gradients match central differences in every mode") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> normal(0.0, 1.5);
    for (auto mode : {LinearMode::Temperature, LinearMode::Vector, LinearMode::VectorBias, LinearMode::MatrixBias}) {
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t k = 2 + rng() % 4;
            const std::size_t n = 1 + rng() % 20;
            Matrix logits(n, k);
            oracle::Rows rows(n, std::vector<double>(k));
            std::vector<int> labels(n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < k; ++j) rows[i][j] = logits(i, j) = 2.0 * normal(rng);
                labels[i] = static_cast<int>(rng() % k);
            }
            std::vector<double> params(LinearLogitMap::parameter_count(mode, k));
            for (double& p : params) p = 0.5 * normal(rng);

            const auto analytic = nll_objective_grad(params, logits, labels, mode);
            auto f = [&](const std::vector<double>& x) {
                return oracle::affine_nll(rows, labels, [&](const std::vector<double>& z) {
                    std::vector<double> u(k, 0.0);
                    switch (mode) {
                        case LinearMode::Temperature:
                            for (std::size_t c = 0; c < k; ++c) u[c] = z[c] / std::exp(x[0]);
                            break;
                        case LinearMode::Vector:
                            for (std::size_t c = 0; c < k; ++c) u[c] = x[c] * z[c];
                            break;
                        case LinearMode::VectorBias:
                            for (std::size_t c = 0; c < k; ++c) u[c] = x[c] * z[c] + x[k + c];
                            break;
                        case LinearMode::MatrixBias:
                            for (std::size_t r = 0; r < k; ++r) {
                                u[r] = x[k * k + r];
                                for (std::size_t c = 0; c < k; ++c) u[r] += x[r * k + c] * z[c];
                            }
                            break;
                    }
                    return u;
                });
            };
            CHECK(std::abs(analytic.value - f(params)) < 1e-12);
            const auto numeric = oracle::central_difference(f, params, 1e-5);
            std::vector<double> diff(params.size());
            for (std::size_t i = 0; i < params.size(); ++i) diff[i] = analytic.gradient[i] - numeric[i];
            CHECK(norm(diff) <= 1e-5 * std::max(norm(analytic.gradient), norm(numeric)));
        }
    }
}

TEST_CASE("objective rejects bad shapes") {
    Matrix logits(2, 3);
    const std::vector<int> labels{0, 1};
    const std::vector<double> wrong{1.0, 2.0};
    CHECK_THROWS_AS(nll_objective_grad(wrong, logits, labels, LinearMode::Vector), Error);
    const std::vector<int> short_labels{0};
    const std::vector<double> params{0.0};
    CHECK_THROWS_AS(nll_objective_grad(params, logits, short_labels, LinearMode::Temperature), Error);
}

TEST_CASE("gradient descent with backtracking on a quadratic") {
    // f(x) = (x0 - 3)^2 + 10 (x1 + 1)^2
    Objective f = [](std::span<const double> x, std::span<double> g) {
        g[0] = 2.0 * (x[0] - 3.0);
        g[1] = 20.0 * (x[1] + 1.0);
        return (x[0] - 3.0) * (x[0] - 3.0) + 10.0 * (x[1] + 1.0) * (x[1] + 1.0);
    };
    const auto r = minimize_gradient_descent(f, {0.0, 0.0});
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(r.x[1] == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(r.value <= r.initial_value);

    DescentOptions boxed;
    boxed.project = [](std::span<double> x) { x[0] = std::min(x[0], 1.0); };
    const auto b = minimize_gradient_descent(f, {0.0, 0.0}, boxed);
    CHECK(b.converged);
    CHECK(b.x[0] == doctest::Approx(1.0));
}

TEST_CASE("temperature fit recovers the distortion and keeps predictions") {
    SynthConfig cfg;
    cfg.n = 10000;
    cfg.classes = 10;
    cfg.sigma = 2.0;
    cfg.seed = 42;
    for (double s : {1.0, 2.0}) {
        cfg.distortion = s;
        const auto calib = generate(cfg);
        const auto [map, report] = fit_linear_scaling(calib, LinearMode::Temperature);
        CHECK(report.converged);
        CHECK(report.gradient_norm < 1e-6);
        CHECK(report.final_nll <= report.initial_nll);
        CHECK(std::abs(map.temperature - s) / s < 0.05);

        const auto out = apply_map(CalibrationMap{map}, calib);
        CHECK(out.has_logits());
        CHECK(top_label(out).pred == top_label(calib).pred);
    }
}

TEST_CASE("property: fits never end above the initial NLL") {
    SynthConfig cfg;
    cfg.n = 300;
    cfg.classes = 4;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        cfg.seed = seed;
        cfg.distortion = 0.5 + static_cast<double>(seed);
        const auto calib = generate(cfg);
        for (auto mode : {LinearMode::Temperature, LinearMode::Vector, LinearMode::VectorBias, LinearMode::MatrixBias}) {
            const auto [map, report] = fit_linear_scaling(calib, mode);
            CHECK(report.final_nll <= report.initial_nll);
            CHECK(report.final_nll == doctest::Approx(nll(apply_map(CalibrationMap{map}, calib))).epsilon(1e-9));
        }
    }
}

TEST_CASE("probability-only input falls back to log-probabilities") {
    SynthConfig cfg;
    cfg.n = 2000;
    cfg.classes = 5;
    cfg.distortion = 2.0;
    cfg.seed = 3;
    const auto with_logits = generate(cfg);
    const auto probs_only = PredictionSet::from_probs(with_logits.probs(),
                                                      std::vector<int>(with_logits.labels().begin(), with_logits.labels().end()));
    const auto [a, ra] = fit_linear_scaling(with_logits, LinearMode::Temperature);
    const auto [b, rb] = fit_linear_scaling(probs_only, LinearMode::Temperature);
    // log-softmax differs from the logits by a per-row shift, which softmax ignores.
    CHECK(b.temperature == doctest::Approx(a.temperature).epsilon(1e-6));
    const auto out = apply_map(CalibrationMap{b}, probs_only);
    CHECK(out.has_logits());
}

TEST_CASE("identity temperature map leaves probabilities unchanged") {
    SynthConfig cfg;
    cfg.n = 100;
    cfg.classes = 3;
    const auto ps = generate(cfg);
    const auto out = apply_map(CalibrationMap{LinearLogitMap::identity(LinearMode::Temperature, 3)}, ps);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(out.prob_row(i)[j] - ps.prob_row(i)[j]) < 1e-12);
    }
}
