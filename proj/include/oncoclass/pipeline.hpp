#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oncoclass/classifiers_optim.hpp"
#include "oncoclass/dataset.hpp"
#include "oncoclass/evaluation.hpp"
#include "oncoclass/model.hpp"
#include "oncoclass/preprocess.hpp"

namespace oncoclass {

inline constexpr int kReportSchemaVersion = 1;

struct PipelineConfig {
    std::string train_path;
    std::string test_path;
    Orientation format = Orientation::kAuto;
    double alpha = 0.001;
    std::vector<std::string> classifiers;  // canonical names, report order follows this list
    std::uint64_t seed = 1;
    std::vector<double> scale_factors = default_scale_factors();
    std::string out_dir = "out";
    std::string positive_label = "Tumor";
    unsigned jobs = 1;
    std::map<std::string, Params> params;  // per-classifier overrides

    /// Throws ConfigError on an invalid alpha, classifier name, parameter
    /// key, duplicate classifier, or non-positive scale factor.
    void validate() const;

    bool operator==(const PipelineConfig&) const = default;
};

/// All ten classifiers in canonical order.
std::vector<std::string> all_classifier_names();

/// Applies "classifier.param=value" to the config.
void apply_override(PipelineConfig& config, const std::string& assignment);

struct SelectionSummary {
    std::size_t genes_before = 0;
    std::size_t genes_after = 0;
    double alpha = 0.0;
    std::size_t zero_iqr_genes = 0;
    std::size_t degenerate_genes = 0;
    std::vector<std::string> kept_gene_ids;
    bool operator==(const SelectionSummary&) const = default;
};

struct ClassifierReport {
    std::string name;
    std::string display_name;
    MetricSet train;
    MetricSet test;
    RobustnessReport robustness;
    bool operator==(const ClassifierReport&) const = default;
};

struct RunReport {
    int schema_version = kReportSchemaVersion;
    PipelineConfig config;
    std::array<std::string, 2> label_names;
    std::size_t positive = 0;  // index into label_names
    SelectionSummary selection;
    std::vector<ClassifierReport> classifiers;
    std::vector<GaGeneration> ga_trace;

    // Not part of report.json.
    std::map<std::string, double> timings;  // seconds per stage
    std::optional<SelectionResult> selection_detail;
};

/// load -> select genes -> project/normalize -> train -> evaluate -> sweep.
RunReport run_pipeline(const PipelineConfig& config);

/// Same, on datasets already in memory (paths in the config are not read).
RunReport run_pipeline(const PipelineConfig& config, const ExpressionDataset& train, const ExpressionDataset& test);

enum class ReportFormat { kJson, kCsv, kPlotData };

/// Writes the requested outputs under `dir` (created if missing). Returns the written paths.
std::vector<std::filesystem::path> emit_report(const RunReport& report, const std::filesystem::path& dir,
                                               const std::set<ReportFormat>& formats = {ReportFormat::kJson,
                                                                                        ReportFormat::kCsv,
                                                                                        ReportFormat::kPlotData});

}  // namespace oncoclass
