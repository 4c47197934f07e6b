#pragma once

// JSON and CSV renderings of pipeline results.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "oncoclass/pipeline.hpp"

namespace oncoclass {

void to_json(nlohmann::json& j, const ConfusionMatrix& cm);
void from_json(const nlohmann::json& j, ConfusionMatrix& cm);
void to_json(nlohmann::json& j, const MetricSet& m);
void from_json(const nlohmann::json& j, MetricSet& m);
void to_json(nlohmann::json& j, const FactorResult& f);
void from_json(const nlohmann::json& j, FactorResult& f);
void to_json(nlohmann::json& j, const RobustnessReport& r);
void from_json(const nlohmann::json& j, RobustnessReport& r);
void to_json(nlohmann::json& j, const GaGeneration& g);
void from_json(const nlohmann::json& j, GaGeneration& g);
void to_json(nlohmann::json& j, const PipelineConfig& c);
void from_json(const nlohmann::json& j, PipelineConfig& c);
void to_json(nlohmann::json& j, const SelectionSummary& s);
void from_json(const nlohmann::json& j, SelectionSummary& s);
void to_json(nlohmann::json& j, const ClassifierReport& c);
void from_json(const nlohmann::json& j, ClassifierReport& c);
/// Everything except timings and the per-gene selection detail.
void to_json(nlohmann::json& j, const RunReport& r);
void from_json(const nlohmann::json& j, RunReport& r);

/// Kept gene ids, per-gene t / S / p / status, alpha, per-gene median and IQR.
nlohmann::json selection_to_json(const SelectionResult& s);

/// Technique x {Sn, Sp} rows, one column per scale factor.
void write_robustness_csv(std::ostream& out, const RunReport& report);
void write_performance_csv(std::ostream& out, const RunReport& report);
void write_mean_sn_sp_csv(std::ostream& out, const RunReport& report);
void write_mean_precision_accuracy_csv(std::ostream& out, const RunReport& report);
void write_ccs_ics_csv(std::ostream& out, const RunReport& report);
void write_accuracy_csv(std::ostream& out, const RunReport& report);
void write_ga_trace_csv(std::ostream& out, const std::vector<GaGeneration>& trace);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace oncoclass
