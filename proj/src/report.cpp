#include "oncoclass/report.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include "oncoclass/common.hpp"
#include "oncoclass/registry.hpp"

namespace oncoclass {

using nlohmann::json;

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

void to_json(json& j, const ConfusionMatrix& cm) {
    j = json{{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}};
}

void from_json(const json& j, ConfusionMatrix& cm) {
    j.at("tp").get_to(cm.tp);
    j.at("fp").get_to(cm.fp);
    j.at("tn").get_to(cm.tn);
    j.at("fn").get_to(cm.fn);
}

void to_json(json& j, const MetricSet& m) {
    j = json{{"confusion", m.cm},
             {"ccs", m.ccs},
             {"ics", m.ics},
             {"sensitivity", m.sensitivity},
             {"specificity", m.specificity},
             {"precision", m.precision},
             {"accuracy", m.accuracy},
             {"tpr", m.tpr},
             {"fpr", m.fpr},
             {"rmse", m.rmse ? json(*m.rmse) : json(nullptr)},
             {"vacuous",
              {{"sensitivity", m.sensitivity_vacuous},
               {"specificity", m.specificity_vacuous},
               {"precision", m.precision_vacuous}}}};
}

void from_json(const json& j, MetricSet& m) {
    j.at("confusion").get_to(m.cm);
    j.at("ccs").get_to(m.ccs);
    j.at("ics").get_to(m.ics);
    j.at("sensitivity").get_to(m.sensitivity);
    j.at("specificity").get_to(m.specificity);
    j.at("precision").get_to(m.precision);
    j.at("accuracy").get_to(m.accuracy);
    j.at("tpr").get_to(m.tpr);
    j.at("fpr").get_to(m.fpr);
    if (j.at("rmse").is_null()) {
        m.rmse.reset();
    } else {
        m.rmse = j.at("rmse").get<double>();
    }
    const auto& v = j.at("vacuous");
    v.at("sensitivity").get_to(m.sensitivity_vacuous);
    v.at("specificity").get_to(m.specificity_vacuous);
    v.at("precision").get_to(m.precision_vacuous);
}

void to_json(json& j, const FactorResult& f) {
    j = json{{"factor", f.factor}, {"label", f.label}, {"metrics", f.metrics}};
}

void from_json(const json& j, FactorResult& f) {
    j.at("factor").get_to(f.factor);
    j.at("label").get_to(f.label);
    j.at("metrics").get_to(f.metrics);
}

void to_json(json& j, const RobustnessReport& r) {
    j = json{{"per_factor", r.per_factor},
             {"mean_sensitivity", r.mean_sensitivity},
             {"mean_specificity", r.mean_specificity},
             {"mean_precision", r.mean_precision},
             {"mean_accuracy", r.mean_accuracy}};
}

void from_json(const json& j, RobustnessReport& r) {
    j.at("per_factor").get_to(r.per_factor);
    j.at("mean_sensitivity").get_to(r.mean_sensitivity);
    j.at("mean_specificity").get_to(r.mean_specificity);
    j.at("mean_precision").get_to(r.mean_precision);
    j.at("mean_accuracy").get_to(r.mean_accuracy);
}

void to_json(json& j, const GaGeneration& g) {
    j = json{{"generation", g.generation}, {"best_mse", g.best_mse}, {"avg_mse", g.avg_mse}};
}

void from_json(const json& j, GaGeneration& g) {
    j.at("generation").get_to(g.generation);
    j.at("best_mse").get_to(g.best_mse);
    j.at("avg_mse").get_to(g.avg_mse);
}

void to_json(json& j, const PipelineConfig& c) {
    json params = json::object();
    for (const auto& [name, p] : c.params) params[name] = p.values();
    j = json{{"train", c.train_path},
             {"test", c.test_path},
             {"format", to_string(c.format)},
             {"alpha", c.alpha},
             {"classifiers", c.classifiers},
             {"seed", c.seed},
             {"scale_factors", c.scale_factors},
             {"out", c.out_dir},
             {"positive", c.positive_label},
             {"jobs", c.jobs},
             {"params", params}};
}

// Missing keys keep their defaults so a config file may be partial; unknown
// keys are rejected to catch typos.
void from_json(const json& j, PipelineConfig& c) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known{"train", "test",  "format",   "alpha", "classifiers", "seed",
                                             "scale_factors", "out", "positive", "jobs",  "params"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    try {
        if (j.contains("train")) j.at("train").get_to(c.train_path);
        if (j.contains("test")) j.at("test").get_to(c.test_path);
        if (j.contains("format")) c.format = parse_orientation(j.at("format").get<std::string>());
        if (j.contains("alpha")) j.at("alpha").get_to(c.alpha);
        if (j.contains("classifiers")) j.at("classifiers").get_to(c.classifiers);
        if (j.contains("seed")) j.at("seed").get_to(c.seed);
        if (j.contains("scale_factors")) j.at("scale_factors").get_to(c.scale_factors);
        if (j.contains("out")) j.at("out").get_to(c.out_dir);
        if (j.contains("positive")) j.at("positive").get_to(c.positive_label);
        if (j.contains("jobs")) j.at("jobs").get_to(c.jobs);
        if (j.contains("params")) {
            c.params.clear();
            for (const auto& [name, values] : j.at("params").items()) {
                c.params[name] = Params(values.get<std::map<std::string, double>>());
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

void to_json(json& j, const SelectionSummary& s) {
    j = json{{"genes_before", s.genes_before},     {"genes_after", s.genes_after},
             {"alpha", s.alpha},                   {"zero_iqr_genes", s.zero_iqr_genes},
             {"degenerate_genes", s.degenerate_genes}, {"kept_gene_ids", s.kept_gene_ids}};
}

void from_json(const json& j, SelectionSummary& s) {
    j.at("genes_before").get_to(s.genes_before);
    j.at("genes_after").get_to(s.genes_after);
    j.at("alpha").get_to(s.alpha);
    j.at("zero_iqr_genes").get_to(s.zero_iqr_genes);
    j.at("degenerate_genes").get_to(s.degenerate_genes);
    j.at("kept_gene_ids").get_to(s.kept_gene_ids);
}

void to_json(json& j, const ClassifierReport& c) {
    j = json{{"name", c.name},
             {"display_name", c.display_name},
             {"train", c.train},
             {"test", c.test},
             {"robustness", c.robustness}};
}

void from_json(const json& j, ClassifierReport& c) {
    j.at("name").get_to(c.name);
    j.at("display_name").get_to(c.display_name);
    j.at("train").get_to(c.train);
    j.at("test").get_to(c.test);
    j.at("robustness").get_to(c.robustness);
}

void to_json(json& j, const RunReport& r) {
    j = json{{"schema_version", r.schema_version},
             {"config", r.config},
             {"seed", r.config.seed},
             {"labels", r.label_names},
             {"positive_label", r.label_names[r.positive]},
             {"selection", r.selection},
             {"classifiers", r.classifiers},
             {"ga_trace", r.ga_trace}};
}

void from_json(const json& j, RunReport& r) {
    j.at("schema_version").get_to(r.schema_version);
    if (r.schema_version != kReportSchemaVersion) {
        throw ConfigError("unsupported report schema version " + std::to_string(r.schema_version));
    }
    r.config = PipelineConfig{};
    j.at("config").get_to(r.config);
    j.at("labels").get_to(r.label_names);
    const auto positive = j.at("positive_label").get<std::string>();
    r.positive = positive == r.label_names[1] ? 1 : 0;
    j.at("selection").get_to(r.selection);
    j.at("classifiers").get_to(r.classifiers);
    j.at("ga_trace").get_to(r.ga_trace);
    r.timings.clear();
    r.selection_detail.reset();
}

nlohmann::json selection_to_json(const SelectionResult& s) {
    json genes = json::array();
    for (std::size_t g = 0; g < s.gene_ids.size(); ++g) {
        const char* status = "tested";
        if (s.ttest.status[g] == GeneStatus::kZeroIqr) status = "zero_iqr";
        if (s.ttest.status[g] == GeneStatus::kDegenerate) status = "degenerate";
        const bool tested = s.ttest.status[g] == GeneStatus::kTested;
        genes.push_back({{"id", s.gene_ids[g]},
                         {"status", status},
                         {"t", tested ? json(s.ttest.t[g]) : json(nullptr)},
                         {"pooled_sd", tested ? json(s.ttest.pooled_sd[g]) : json(nullptr)},
                         {"p", s.ttest.p[g]},
                         {"median", s.norm.median[g]},
                         {"iqr", s.norm.iqr[g]}});
    }
    std::vector<std::string> kept;
    for (auto k : s.keep) kept.push_back(s.gene_ids[k]);
    return json{{"alpha", s.alpha}, {"df", s.ttest.df}, {"kept_gene_ids", kept}, {"genes", genes}};
}

namespace {

std::string short_name(const ClassifierReport& c) { return std::string(classifier_info(c.name).short_name); }

// Quotes a CSV field when it needs it.
std::string field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string pct(std::size_t part, std::size_t total) {
    return total == 0 ? "" : format_number(100.0 * static_cast<double>(part) / static_cast<double>(total));
}

}  // namespace

// technique, CCS, ICS, RMSE, TPR and FPR for both labels (positive first).
void write_performance_csv(std::ostream& out, const RunReport& r) {
    const auto& pos = r.label_names[r.positive];
    const auto& neg = r.label_names[1 - r.positive];
    out << "technique,ccs,ccs_pct,ics,ics_pct,rmse," << field("tpr_" + pos) << ',' << field("tpr_" + neg) << ','
        << field("fpr_" + pos) << ',' << field("fpr_" + neg) << '\n';
    for (const auto& c : r.classifiers) {
        const auto& m = c.test;
        const auto n = m.ccs + m.ics;
        out << field(c.display_name) << ',' << m.ccs << ',' << pct(m.ccs, n) << ',' << m.ics << ','
            << pct(m.ics, n) << ',' << (m.rmse ? format_number(*m.rmse) : "") << ',' << format_number(m.tpr[0])
            << ',' << format_number(m.tpr[1]) << ',' << format_number(m.fpr[0]) << ',' << format_number(m.fpr[1])
            << '\n';
    }
}

void write_robustness_csv(std::ostream& out, const RunReport& r) {
    out << "technique,measure";
    for (double f : r.config.scale_factors) out << ',' << field(factor_label(f));
    out << '\n';
    for (const auto& c : r.classifiers) {
        out << field(short_name(c)) << ",Sn";
        for (const auto& f : c.robustness.per_factor) out << ',' << format_number(f.metrics.sensitivity);
        out << '\n' << field(short_name(c)) << ",Sp";
        for (const auto& f : c.robustness.per_factor) out << ',' << format_number(f.metrics.specificity);
        out << '\n';
    }
}

namespace {

template <class Pick>
void write_transposed(std::ostream& out, const RunReport& r, const std::vector<std::pair<std::string, Pick>>& rows) {
    out << "measure";
    for (const auto& c : r.classifiers) out << ',' << field(short_name(c));
    out << '\n';
    for (const auto& [label, pick] : rows) {
        out << label;
        for (const auto& c : r.classifiers) out << ',' << format_number(pick(c.robustness));
        out << '\n';
    }
}

using Pick = double (*)(const RobustnessReport&);

}  // namespace

void write_mean_sn_sp_csv(std::ostream& out, const RunReport& r) {
    write_transposed<Pick>(out, r,
                           {{"Sensitivity", [](const RobustnessReport& x) { return x.mean_sensitivity; }},
                            {"Specificity", [](const RobustnessReport& x) { return x.mean_specificity; }}});
}

void write_mean_precision_accuracy_csv(std::ostream& out, const RunReport& r) {
    write_transposed<Pick>(out, r,
                           {{"Precision", [](const RobustnessReport& x) { return x.mean_precision; }},
                            {"Accuracy", [](const RobustnessReport& x) { return x.mean_accuracy; }}});
}

void write_ccs_ics_csv(std::ostream& out, const RunReport& r) {
    out << "technique,ccs,ics\n";
    for (const auto& c : r.classifiers) out << field(short_name(c)) << ',' << c.test.ccs << ',' << c.test.ics << '\n';
}

void write_accuracy_csv(std::ostream& out, const RunReport& r) {
    out << "technique,accuracy\n";
    for (const auto& c : r.classifiers) out << field(short_name(c)) << ',' << format_number(c.test.accuracy) << '\n';
}

void write_ga_trace_csv(std::ostream& out, const std::vector<GaGeneration>& trace) {
    out << "generation,best_mse,avg_mse\n";
    for (const auto& g : trace) {
        out << g.generation << ',' << format_number(g.best_mse) << ',' << format_number(g.avg_mse) << '\n';
    }
}

namespace {

template <class Writer>
std::filesystem::path write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    writer(out);
    out.flush();
    if (!out) throw ConfigError("failed writing " + path.string());
    return path;
}

}  // namespace

std::vector<std::filesystem::path> emit_report(const RunReport& report, const std::filesystem::path& dir,
                                               const std::set<ReportFormat>& formats) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw ConfigError("cannot create output directory " + dir.string());
    }
    std::vector<std::filesystem::path> written;
    if (formats.contains(ReportFormat::kJson)) {
        written.push_back(write_file(dir / "report.json", [&](std::ostream& o) { o << json(report).dump(2) << '\n'; }));
        written.push_back(write_file(dir / "timings.json", [&](std::ostream& o) {
            o << json{{"seconds", report.timings}}.dump(2) << '\n';
        }));
        if (report.selection_detail) {
            written.push_back(write_file(dir / "selection.json", [&](std::ostream& o) {
                o << selection_to_json(*report.selection_detail).dump(2) << '\n';
            }));
        }
    }
    if (formats.contains(ReportFormat::kCsv)) {
        written.push_back(write_file(dir / "table3_performance.csv",
                                     [&](std::ostream& o) { write_performance_csv(o, report); }));
        written.push_back(write_file(dir / "table4_sn_sp_by_factor.csv",
                                     [&](std::ostream& o) { write_robustness_csv(o, report); }));
        written.push_back(write_file(dir / "table5_mean_sn_sp.csv",
                                     [&](std::ostream& o) { write_mean_sn_sp_csv(o, report); }));
        written.push_back(write_file(dir / "table6_mean_precision_accuracy.csv",
                                     [&](std::ostream& o) { write_mean_precision_accuracy_csv(o, report); }));
    }
    if (formats.contains(ReportFormat::kPlotData)) {
        written.push_back(write_file(dir / "fig1_ccs_ics.csv", [&](std::ostream& o) { write_ccs_ics_csv(o, report); }));
        written.push_back(write_file(dir / "fig2_accuracy.csv", [&](std::ostream& o) { write_accuracy_csv(o, report); }));
        written.push_back(
            write_file(dir / "fig3_ga_fitness.csv", [&](std::ostream& o) { write_ga_trace_csv(o, report.ga_trace); }));
    }
    return written;
}

}  // namespace oncoclass
