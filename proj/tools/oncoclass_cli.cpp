// oncoclass: gene selection + ten-classifier benchmark on two-class
// expression data.
//
//   oncoclass run --train tr.csv --test te.csv --out results/
//   oncoclass synth --train tr.csv --test te.csv --seed 3
//   oncoclass convert --in data.tsv --from genes --out data.csv --to samples

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oncoclass/common.hpp"
#include "oncoclass/kernels.hpp"
#include "oncoclass/pipeline.hpp"
#include "oncoclass/registry.hpp"
#include "oncoclass/report.hpp"
#include "oncoclass/synthetic.hpp"

using namespace oncoclass;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitTraining = 4;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end) throw ConfigError(what + ": '" + s + "' is not a number");
    return v;
}

struct RunFlags {
    std::string config_file;
    std::string train, test, format, classifiers, scale_factors, out, positive, emit = "json,csv,plot";
    double alpha = 0.0;
    std::uint64_t seed = 0;
    unsigned jobs = 0;
    std::vector<std::string> overrides;
};

PipelineConfig build_config(const RunFlags& f, const CLI::App& cmd) {
    PipelineConfig cfg;
    cfg.classifiers = all_classifier_names();
    if (!f.config_file.empty()) {
        std::ifstream in(f.config_file);
        if (!in) throw ConfigError("cannot open config file " + f.config_file);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(f.config_file + ": " + e.what());
        }
        from_json(j, cfg);
    }
    auto given = [&](const char* name) { return cmd.count(name) > 0; };
    if (given("--train")) cfg.train_path = f.train;
    if (given("--test")) cfg.test_path = f.test;
    if (given("--format")) cfg.format = parse_orientation(f.format);
    if (given("--alpha")) cfg.alpha = f.alpha;
    if (given("--seed")) cfg.seed = f.seed;
    if (given("--jobs")) cfg.jobs = f.jobs;
    if (given("--out")) cfg.out_dir = f.out;
    if (given("--positive")) cfg.positive_label = f.positive;
    if (given("--classifiers")) {
        cfg.classifiers = f.classifiers == "all" ? all_classifier_names()
                          : f.classifiers == "none" ? std::vector<std::string>{}
                                                    : split_list(f.classifiers);
    }
    if (given("--scale-factors")) {
        cfg.scale_factors.clear();
        for (const auto& s : split_list(f.scale_factors)) cfg.scale_factors.push_back(parse_double(s, "--scale-factors"));
    }
    for (const auto& o : f.overrides) apply_override(cfg, o);
    if (cfg.train_path.empty() || cfg.test_path.empty()) throw ConfigError("--train and --test are required");
    cfg.validate();
    return cfg;
}

std::set<ReportFormat> parse_emit(const std::string& text) {
    std::set<ReportFormat> out;
    for (const auto& s : split_list(text)) {
        if (s == "json") {
            out.insert(ReportFormat::kJson);
        } else if (s == "csv") {
            out.insert(ReportFormat::kCsv);
        } else if (s == "plot" || s == "plot-data") {
            out.insert(ReportFormat::kPlotData);
        } else {
            throw ConfigError("--emit: unknown format '" + s + "'");
        }
    }
    return out;
}

void print_summary(const RunReport& r, std::ostream& out) {
    out << "genes: " << r.selection.genes_before << " -> " << r.selection.genes_after << " (alpha "
        << r.selection.alpha << ")\n";
    for (const auto& c : r.classifiers) {
        out << "  " << c.display_name << ": test " << c.test.ccs << '/' << (c.test.ccs + c.test.ics) << " correct ("
            << format_number(100.0 * c.test.accuracy) << "%), mean sweep accuracy "
            << format_number(c.robustness.mean_accuracy) << '\n';
    }
}

int run_command(const RunFlags& f, const CLI::App& cmd) {
    const PipelineConfig cfg = build_config(f, cmd);
    const auto formats = parse_emit(f.emit);
    const RunReport report = run_pipeline(cfg);
    const auto files = emit_report(report, cfg.out_dir, formats);
    print_summary(report, std::cout);
    std::cout << "wrote " << files.size() << " files to " << cfg.out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-class gene expression classification benchmark"};
    app.require_subcommand(0, 1);
    bool show_isa = false;
    app.add_flag("--print-isa", show_isa, "Print the selected SIMD kernel set");

    RunFlags rf;
    auto* run = app.add_subcommand("run", "Select genes, train classifiers, evaluate and emit reports");
    run->add_option("--config", rf.config_file, "JSON config file (flags override its keys)");
    run->add_option("--train", rf.train, "Training data file");
    run->add_option("--test", rf.test, "Independent test data file");
    run->add_option("--format", rf.format, "genes-as-rows | samples-as-rows | auto");
    run->add_option("--alpha", rf.alpha, "t-test significance threshold, in (0, 1]");
    run->add_option("--classifiers", rf.classifiers, "Comma list of classifiers, 'all' or 'none'");
    run->add_option("--seed", rf.seed, "Seed for all stochastic classifiers");
    run->add_option("--scale-factors", rf.scale_factors, "Comma list of test-set scale factors");
    run->add_option("--out", rf.out, "Output directory");
    run->add_option("--set", rf.overrides, "Hyperparameter override classifier.param=value (repeatable)");
    run->add_option("--jobs", rf.jobs, "Worker threads");
    run->add_option("--positive", rf.positive, "Positive class label");
    run->add_option("--emit", rf.emit, "Comma list of json, csv, plot")->capture_default_str();

    SyntheticSpec spec;
    std::size_t test_pos = 25, test_neg = 9;
    std::string synth_train, synth_test, synth_format = "genes-as-rows", planted_out;
    auto* synth = app.add_subcommand("synth", "Write a planted-gene train/test pair");
    synth->add_option("--train", synth_train, "Training output file")->required();
    synth->add_option("--test", synth_test, "Test output file")->required();
    synth->add_option("--genes", spec.genes)->capture_default_str();
    synth->add_option("--planted", spec.planted)->capture_default_str();
    synth->add_option("--positives", spec.positives, "Training Tumor samples")->capture_default_str();
    synth->add_option("--negatives", spec.negatives, "Training Normal samples")->capture_default_str();
    synth->add_option("--test-positives", test_pos)->capture_default_str();
    synth->add_option("--test-negatives", test_neg)->capture_default_str();
    synth->add_option("--gap", spec.mean_gap, "Class mean gap in noise units")->capture_default_str();
    synth->add_option("--seed", spec.seed)->capture_default_str();
    synth->add_option("--format", synth_format)->capture_default_str();
    synth->add_option("--planted-out", planted_out, "Write planted gene ids here");

    std::string conv_in, conv_out, conv_from = "auto", conv_to = "genes-as-rows";
    auto* convert = app.add_subcommand("convert", "Rewrite a data file in the other orientation");
    convert->add_option("--in", conv_in)->required();
    convert->add_option("--out", conv_out)->required();
    convert->add_option("--from", conv_from)->capture_default_str();
    convert->add_option("--to", conv_to)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    if (show_isa) {
        std::cout << kernels::isa_name(kernels::active_isa()) << '\n';
        if (app.get_subcommands().empty()) return 0;
    } else if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return kExitConfig;
    }

    try {
        if (*run) return run_command(rf, *run);
        if (*synth) {
            const auto format = parse_orientation(synth_format);
            const auto train = make_synthetic(spec);
            SyntheticSpec test_spec = spec;
            test_spec.positives = test_pos;
            test_spec.negatives = test_neg;
            test_spec.seed = spec.seed ^ 0x9e3779b97f4a7c15ULL;
            const auto test = make_synthetic(test_spec, spec.seed);
            save_dataset(train.dataset, synth_train, format);
            save_dataset(test.dataset, synth_test, format);
            if (!planted_out.empty()) {
                std::ofstream out(planted_out);
                for (auto g : train.planted_genes) out << train.dataset.gene_ids[g] << '\n';
                if (!out) throw ConfigError("cannot write " + planted_out);
            }
            return 0;
        }
        if (*convert) {
            const auto ds = load_dataset(conv_in, parse_orientation(conv_from));
            save_dataset(ds, conv_out, parse_orientation(conv_to));
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const TrainingError& e) {
        std::cerr << "training error: " << e.what() << '\n';
        return kExitTraining;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
