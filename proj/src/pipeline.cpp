#include "oncoclass/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include "oncoclass/common.hpp"
#include "oncoclass/registry.hpp"

namespace oncoclass {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs `body`, re-raising any failure with a stage prefix. The error category
// (and so the exit code) is kept; anything uncategorized becomes `Fallback`.
template <class Fallback, class F>
auto with_stage(const std::string& stage, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const ConfigError& e) {
        throw ConfigError(stage + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(stage + ": " + e.what());
    } catch (const TrainingError& e) {
        throw TrainingError(stage + ": " + e.what());
    } catch (const std::exception& e) {
        throw Fallback(stage + ": " + e.what());
    }
}

// Puts the test labels in the training label order.
ExpressionDataset align_labels(ExpressionDataset test, const std::array<std::string, 2>& names) {
    if (test.label_names == names) return test;
    if (test.label_names[0] == names[1] && test.label_names[1] == names[0]) {
        for (auto& y : test.labels) y = 1 - y;
        test.label_names = names;
        return test;
    }
    throw DataError("test labels {" + test.label_names[0] + ", " + test.label_names[1] +
                    "} do not match training labels {" + names[0] + ", " + names[1] + "}");
}

}  // namespace

std::vector<std::string> all_classifier_names() {
    std::vector<std::string> names;
    for (const auto& c : classifier_catalog()) names.emplace_back(c.name);
    return names;
}

void PipelineConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    std::set<std::string> seen;
    for (const auto& name : classifiers) {
        if (!is_classifier_name(name)) throw ConfigError("unknown classifier '" + name + "'");
        if (!seen.insert(name).second) throw ConfigError("classifier '" + name + "' listed twice");
    }
    for (const auto& [name, p] : params) validate_params(name, p);
    for (double c : scale_factors) {
        if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("scale factors must be positive and finite");
    }
    if (jobs == 0) throw ConfigError("jobs must be at least 1");
    if (positive_label.empty()) throw ConfigError("positive label must not be empty");
}

void apply_override(PipelineConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
        throw ConfigError("override '" + assignment + "' is not of the form classifier.param=value");
    }
    const std::string name = assignment.substr(0, dot);
    const std::string key = assignment.substr(dot + 1, eq - dot - 1);
    const std::string text = assignment.substr(eq + 1);
    double value = 0.0;
    if (text == "true") {
        value = 1.0;
    } else if (text == "false") {
        value = 0.0;
    } else {
        const char* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, value);
        if (text.empty() || ec != std::errc() || ptr != end) {
            throw ConfigError("override '" + assignment + "': value is not a number");
        }
    }
    Params p = config.params[name];
    p.set(key, value);
    validate_params(name, p);
    config.params[name] = std::move(p);
}

RunReport run_pipeline(const PipelineConfig& config) {
    config.validate();
    auto start = Clock::now();
    const auto train = with_stage<DataError>("loading training data",
                                             [&] { return load_dataset(config.train_path, config.format); });
    const auto test = with_stage<DataError>("loading test data",
                                            [&] { return load_dataset(config.test_path, config.format); });
    const double load_seconds = seconds_since(start);
    RunReport report = run_pipeline(config, train, test);
    report.timings["load"] = load_seconds;
    return report;
}

RunReport run_pipeline(const PipelineConfig& config, const ExpressionDataset& train,
                       const ExpressionDataset& raw_test) {
    config.validate();
    RunReport report;
    report.config = config;
    report.label_names = train.label_names;
    const std::size_t positive = train.label_index(config.positive_label);
    if (positive > 1) {
        throw ConfigError("positive label '" + config.positive_label + "' is not a training label");
    }
    report.positive = positive;
    const ExpressionDataset test = with_stage<DataError>("aligning test data",
                                                         [&] { return align_labels(raw_test, train.label_names); });

    auto start = Clock::now();
    SelectionResult selection =
        with_stage<DataError>("gene selection", [&] { return select_genes(train, config.alpha); });
    report.timings["select"] = seconds_since(start);

    auto& summary = report.selection;
    summary.genes_before = selection.genes_before();
    summary.genes_after = selection.genes_after();
    summary.alpha = selection.alpha;
    for (auto s : selection.ttest.status) {
        summary.zero_iqr_genes += s == GeneStatus::kZeroIqr;
        summary.degenerate_genes += s == GeneStatus::kDegenerate;
    }
    for (auto k : selection.keep) summary.kept_gene_ids.push_back(selection.gene_ids[k]);

    const auto& names = config.classifiers;
    if (!names.empty()) {
        if (selection.keep.empty()) {
            throw DataError("gene selection: no gene passed alpha = " + std::to_string(config.alpha) +
                            "; nothing to train on");
        }
        start = Clock::now();
        const TrainingSet train_set =
            with_stage<DataError>("normalizing training data", [&] { return to_training_set(selection.transform(train)); });
        const TrainingSet test_set =
            with_stage<DataError>("normalizing test data", [&] { return to_training_set(selection.transform(test)); });
        report.timings["transform"] = seconds_since(start);

        const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(config.jobs, names.size()));
        const unsigned inner = std::max(1u, config.jobs / std::max(1u, outer));
        std::vector<std::shared_ptr<const Model>> models(names.size());
        std::vector<double> train_seconds(names.size(), 0.0);
        start = Clock::now();
        parallel_for(names.size(), outer, [&](std::size_t i) {
            const auto& name = names[i];
            const auto t0 = Clock::now();
            const auto it = config.params.find(name);
            const Params params = it == config.params.end() ? Params{} : it->second;
            models[i] = with_stage<TrainingError>("training " + name, [&] {
                return train_classifier(name, train_set, params, SeedSpec{config.seed, stream_id(name)}, inner);
            });
            train_seconds[i] = seconds_since(t0);
        });
        report.timings["train"] = seconds_since(start);
        for (std::size_t i = 0; i < names.size(); ++i) report.timings["train." + names[i]] = train_seconds[i];

        start = Clock::now();
        for (std::size_t i = 0; i < names.size(); ++i) {
            const auto& model = *models[i];
            ClassifierReport cr;
            cr.name = names[i];
            cr.display_name = std::string(classifier_info(names[i]).display_name);
            with_stage<TrainingError>("evaluating " + names[i], [&] {
                cr.train = evaluate(model.predict_all(train_set.x), train_set.y, positive);
                cr.test = evaluate(model.predict_all(test_set.x), test_set.y, positive);
                cr.robustness = scale_sweep(selection, model, test, config.scale_factors, positive);
            });
            if (const auto* ga = dynamic_cast<const GaModel*>(&model)) report.ga_trace = ga->trace;
            report.classifiers.push_back(std::move(cr));
        }
        report.timings["evaluate"] = seconds_since(start);
    }
    report.selection_detail = std::move(selection);
    return report;
}

}  // namespace oncoclass
