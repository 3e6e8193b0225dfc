// calim: measure, fit and apply confidence calibration from prediction dumps.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "calim/binning.hpp"
#include "calim/calibrators.hpp"
#include "calim/compare.hpp"
#include "calim/csv_io.hpp"
#include "calim/diagram.hpp"
#include "calim/error.hpp"
#include "calim/metrics.hpp"
#include "calim/serialization.hpp"
#include "calim/synthetic.hpp"

namespace {

constexpr int kExitInputError = 2;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw calim::Error(calim::ErrorCode::ParseError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::string& path, const std::string& body) {
    if (path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw calim::Error(calim::ErrorCode::ParseError, "cannot write '" + path + "'");
    out << body;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

struct MetricsArgs {
    std::string input;
    std::size_t bins = calim::kDefaultMetricBins;
    std::string scheme = "equal-width";
    bool json = false;
};

int run_metrics(const MetricsArgs& args) {
    const auto ps = calim::read_predictions_file(args.input);
    const auto rep = calim::report(ps, {args.bins, calim::parse_bin_scheme(args.scheme)});
    if (args.json) {
        std::cout << calim::metrics_to_json(rep).dump(2) << "\n";
    } else {
        std::cout << "n: " << ps.size() << ", K: " << ps.num_classes() << "\n" << calim::format_metrics(rep);
    }
    return 0;
}

struct FitArgs {
    std::string method;
    std::string input;
    std::string out;
    std::size_t bins = calim::kDefaultHistogramBins;
    std::string scheme = "equal-width";
};

int run_fit(const FitArgs& args) {
    const calim::Method method = calim::parse_method(args.method);
    const auto calib = calim::read_predictions_file(args.input);
    const auto fitted = calim::fit_method(method, calib, {args.bins, calim::parse_bin_scheme(args.scheme)});
    write_text(args.out, calim::serialize_map(fitted.map));

    std::ostream& log = args.out == "-" ? std::cerr : std::cout;
    log << "fitted " << calim::method_key(method) << " on " << calib.size() << " objects, K = "
        << calib.num_classes() << "\n";
    if (fitted.report) {
        log << fitted.report->summary << "\n";
        if (!fitted.report->converged) {
            std::cerr << "warning: optimizer did not reach the gradient tolerance; map written anyway\n";
        }
    } else if (method == calim::Method::Histogram) {
        log << "bins per class: " << std::get<calim::HistogramMap>(fitted.map).edges.front().count() << " ("
            << args.scheme << ")\n";
    }
    return 0;
}

struct ApplyArgs {
    std::string map;
    std::string input;
    std::string out;
};

int run_apply(const ApplyArgs& args) {
    const auto map = calim::parse_map(read_text(args.map));
    const auto ps = calim::read_predictions_file(args.input);
    const auto calibrated = calim::apply_map(map, ps);
    const auto columns = calibrated.has_logits() ? calim::ColumnFamily::Both : calim::ColumnFamily::Probs;
    if (args.out == "-") {
        calim::write_predictions_csv(std::cout, calibrated, columns);
    } else {
        calim::write_predictions_file(args.out, calibrated, columns);
    }
    return 0;
}

struct ReliabilityArgs {
    std::string input;
    std::size_t bins = calim::kDefaultDiagramBins;
    std::string scheme = "equal-width";
    std::string classwise;
    std::string out = "-";
    std::string svg;
};

int run_reliability(const ReliabilityArgs& args) {
    const auto ps = calim::read_predictions_file(args.input);
    const calim::BinningConfig config{args.bins, calim::parse_bin_scheme(args.scheme)};

    std::vector<calim::ReliabilityTable> tables;
    auto classwise_table = [&](std::size_t j) {
        return calim::classwise_reliability_table(ps, calim::make_edges(config, ps.class_column(j)), j);
    };
    if (args.classwise.empty()) {
        tables.push_back(calim::reliability_table(ps, calim::make_edges(config, calim::top_label(ps).conf)));
    } else if (args.classwise == "all") {
        for (std::size_t j = 0; j < ps.num_classes(); ++j) tables.push_back(classwise_table(j));
    } else {
        long long j = 0;
        try {
            j = std::stoll(args.classwise);
        } catch (const std::exception&) {
            throw calim::Error(calim::ErrorCode::ParseError, "--classwise expects a class number or 'all'");
        }
        if (j < 1 || j > static_cast<long long>(ps.num_classes())) {
            throw calim::Error(calim::ErrorCode::ClassOutOfRange,
                               "class " + args.classwise + " outside 1.." + std::to_string(ps.num_classes()));
        }
        tables.push_back(classwise_table(static_cast<std::size_t>(j - 1)));
    }

    nlohmann::json doc;
    if (args.classwise == "all") {
        doc = nlohmann::json::array();
        for (const auto& t : tables) doc.push_back(calim::diagram_to_json(t));
    } else {
        doc = calim::diagram_to_json(tables.front());
    }
    write_text(args.out, doc.dump(2) + "\n");
    if (!args.svg.empty()) write_text(args.svg, calim::render_svg(tables));
    return 0;
}

struct CompareArgs {
    std::string calib;
    std::string test;
    std::string methods;
    std::size_t bins = calim::kDefaultMetricBins;
    std::size_t hist_bins = calim::kDefaultHistogramBins;
    std::string scheme = "equal-width";
    bool json = false;
};

int run_compare(const CompareArgs& args) {
    calim::ComparisonOptions options;
    if (!args.methods.empty()) {
        options.methods.clear();
        for (const auto& key : split_list(args.methods)) options.methods.push_back(calim::parse_method(key));
    }
    const auto scheme = calim::parse_bin_scheme(args.scheme);
    options.metrics = {args.bins, scheme};
    options.histogram = {args.hist_bins, scheme};

    const auto calib = calim::read_predictions_file(args.calib);
    const auto test = calim::read_predictions_file(args.test);
    const auto comparison = calim::compare_methods(calib, test, options);
    if (args.json) {
        std::cout << calim::comparison_to_json(comparison).dump(2) << "\n";
    } else {
        std::cout << calim::format_comparison(comparison);
    }
    for (const auto& column : comparison.columns) {
        if (column.fit && !column.fit->converged) {
            std::cerr << "warning: " << calim::method_key(column.method)
                      << " optimizer did not reach the gradient tolerance\n";
        }
    }
    return 0;
}

struct SynthArgs {
    std::size_t n = 10000;
    std::size_t classes = 10;
    double sigma = 2.0;
    double distort = 1.0;
    std::uint64_t seed = 0;
    std::string out = "-";
};

int run_synth(const SynthArgs& args) {
    calim::SynthConfig config;
    config.n = args.n;
    config.classes = args.classes;
    config.sigma = args.sigma;
    config.distortion = args.distort;
    config.seed = args.seed;
    const auto ps = calim::generate(config);
    if (args.out == "-") {
        calim::write_predictions_csv(std::cout, ps, calim::ColumnFamily::Logits);
    } else {
        calim::write_predictions_file(args.out, ps, calim::ColumnFamily::Logits);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"calim: confidence calibration metrics, calibration maps and reliability diagrams"};
    app.require_subcommand(1);
    const std::vector<std::string> schemes{"equal-width", "equal-frequency"};

    MetricsArgs metrics;
    auto* cmd_metrics = app.add_subcommand("metrics", "Accuracy, ECE, MCE, cwECE, NLL and Brier score of a predictions file");
    cmd_metrics->add_option("--input", metrics.input, "Predictions CSV")->required();
    cmd_metrics->add_option("--bins", metrics.bins, "Bin count for ECE/MCE/cwECE")->capture_default_str();
    cmd_metrics->add_option("--scheme", metrics.scheme)->check(CLI::IsMember(schemes))->capture_default_str();
    cmd_metrics->add_flag("--json", metrics.json, "Print raw fractions as JSON");

    FitArgs fit;
    auto* cmd_fit = app.add_subcommand("fit", "Fit a calibration map on a calibration set");
    cmd_fit->add_option("--method", fit.method)
        ->required()
        ->check(CLI::IsMember({"histogram", "isotonic", "temperature", "vector", "vector-bias", "matrix-bias"}));
    cmd_fit->add_option("--input", fit.input, "Calibration-set predictions CSV")->required();
    cmd_fit->add_option("--out", fit.out, "Where to write the map ('-' for stdout)")->required();
    cmd_fit->add_option("--bins", fit.bins, "Histogram binning bin count")->capture_default_str();
    cmd_fit->add_option("--scheme", fit.scheme)->check(CLI::IsMember(schemes))->capture_default_str();

    ApplyArgs apply;
    auto* cmd_apply = app.add_subcommand("apply", "Apply a fitted map to a predictions file");
    cmd_apply->add_option("--map", apply.map)->required();
    cmd_apply->add_option("--input", apply.input)->required();
    cmd_apply->add_option("--out", apply.out, "Calibrated predictions CSV ('-' for stdout)")->required();

    ReliabilityArgs rel;
    auto* cmd_rel = app.add_subcommand("reliability", "Reliability diagram table (JSON) and optional SVG");
    cmd_rel->add_option("--input", rel.input)->required();
    cmd_rel->add_option("--bins", rel.bins)->capture_default_str();
    cmd_rel->add_option("--scheme", rel.scheme)->check(CLI::IsMember(schemes))->capture_default_str();
    cmd_rel->add_option("--classwise", rel.classwise, "1-based class number, or 'all'");
    cmd_rel->add_option("--out", rel.out, "Diagram JSON path ('-' for stdout)")->capture_default_str();
    cmd_rel->add_option("--svg", rel.svg, "Also render an SVG diagram here");

    CompareArgs cmp;
    auto* cmd_cmp = app.add_subcommand("compare", "Fit every method on a calibration set and evaluate on a test set");
    cmd_cmp->add_option("--calib", cmp.calib)->required();
    cmd_cmp->add_option("--test", cmp.test)->required();
    cmd_cmp->add_option("--methods", cmp.methods,
                        "Comma-separated subset of before,histogram,isotonic,temperature,vector,vector-bias,matrix-bias");
    cmd_cmp->add_option("--bins", cmp.bins, "Bin count for ECE/MCE/cwECE")->capture_default_str();
    cmd_cmp->add_option("--hist-bins", cmp.hist_bins, "Histogram binning bin count")->capture_default_str();
    cmd_cmp->add_option("--scheme", cmp.scheme)->check(CLI::IsMember(schemes))->capture_default_str();
    cmd_cmp->add_flag("--json", cmp.json);

    SynthArgs synth;
    auto* cmd_synth = app.add_subcommand("synth", "Generate a synthetic predictions file with known calibration");
    cmd_synth->add_option("--n", synth.n)->capture_default_str();
    cmd_synth->add_option("--classes", synth.classes)->capture_default_str();
    cmd_synth->add_option("--sigma", synth.sigma, "Scale of the true logits")->capture_default_str();
    cmd_synth->add_option("--distort", synth.distort, "Logit distortion s (>1 overconfident)")->capture_default_str();
    cmd_synth->add_option("--seed", synth.seed)->envname("CALIM_SEED")->capture_default_str();
    cmd_synth->add_option("--out", synth.out)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (cmd_metrics->parsed()) return run_metrics(metrics);
        if (cmd_fit->parsed()) return run_fit(fit);
        if (cmd_apply->parsed()) return run_apply(apply);
        if (cmd_rel->parsed()) return run_reliability(rel);
        if (cmd_cmp->parsed()) return run_compare(cmp);
        if (cmd_synth->parsed()) return run_synth(synth);
    } catch (const calim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return 0;
}
