#include "oncoclass/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oncoclass {

ConfusionMatrix confusion(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                          std::size_t positive) {
    if (predicted.size() != truth.size()) throw std::invalid_argument("prediction/truth length mismatch");
    if (predicted.empty()) throw std::invalid_argument("confusion matrix of zero samples");
    if (positive > 1) throw std::invalid_argument("positive label not in label set");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool actual = truth[i] == positive;
        const bool called = predicted[i] == positive;
        if (actual && called) {
            ++cm.tp;
        } else if (actual) {
            ++cm.fn;
        } else if (called) {
            ++cm.fp;
        } else {
            ++cm.tn;
        }
    }
    return cm;
}

ConfusionMatrix confusion(std::span<const Prediction> predicted, std::span<const std::size_t> truth,
                          std::size_t positive) {
    std::vector<std::size_t> labels(predicted.size());
    std::ranges::transform(predicted, labels.begin(), [](const Prediction& p) { return p.label; });
    return confusion(labels, truth, positive);
}

ConfusionMatrix confusion(const std::vector<std::string>& predicted, const std::vector<std::string>& truth,
                          const std::string& positive) {
    if (predicted.size() != truth.size()) throw std::invalid_argument("prediction/truth length mismatch");
    if (predicted.empty()) throw std::invalid_argument("confusion matrix of zero samples");
    const bool known = std::ranges::find(truth, positive) != truth.end() ||
                       std::ranges::find(predicted, positive) != predicted.end();
    if (!known) throw std::invalid_argument("positive label '" + positive + "' not in label set");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool actual = truth[i] == positive;
        const bool called = predicted[i] == positive;
        if (actual && called) {
            ++cm.tp;
        } else if (actual) {
            ++cm.fn;
        } else if (called) {
            ++cm.fp;
        } else {
            ++cm.tn;
        }
    }
    return cm;
}

namespace {

/// num / den as a single correctly rounded division; `fallback` if den == 0.
double ratio(std::size_t num, std::size_t den, double fallback, bool* vacuous = nullptr) {
    if (den == 0) {
        if (vacuous != nullptr) *vacuous = true;
        return fallback;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricSet metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw std::invalid_argument("metrics of an empty confusion matrix");
    MetricSet m;
    m.cm = cm;
    m.sensitivity = ratio(cm.tp, cm.tp + cm.fn, 1.0, &m.sensitivity_vacuous);
    m.specificity = ratio(cm.tn, cm.tn + cm.fp, 1.0, &m.specificity_vacuous);
    m.precision = ratio(cm.tp, cm.tp + cm.fp, 1.0, &m.precision_vacuous);
    m.ccs = cm.tp + cm.tn;
    m.ics = cm.fp + cm.fn;
    m.accuracy = ratio(m.ccs, cm.total(), 0.0);
    m.tpr = {m.sensitivity, m.specificity};
    m.fpr = {ratio(cm.fp, cm.fp + cm.tn, 0.0), ratio(cm.fn, cm.fn + cm.tp, 0.0)};
    return m;
}

MetricSet evaluate(std::span<const Prediction> predictions, std::span<const std::size_t> truth,
                   std::size_t positive) {
    MetricSet m = metrics(confusion(predictions, truth, positive));
    m.rmse = rmse_probabilistic(predictions, truth);
    return m;
}

std::vector<Prediction> predict_raw(const SelectionResult& selection, const Model& model,
                                    const ExpressionDataset& raw) {
    const ExpressionDataset reduced = selection.transform(raw);
    return model.predict_all(to_training_set(reduced).x);
}

std::vector<double> default_scale_factors() { return {0.5, 2.0, 0.1, 10.0, 0.05, 20.0}; }

std::string factor_label(double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    if (factor == 1.0) return "Base";
    const bool divide = factor < 1.0;
    const double k = divide ? 1.0 / factor : factor;
    std::ostringstream os;
    os << (divide ? "Div " : "Mul ");
    if (std::fabs(k - std::round(k)) < 1e-9) {
        os << static_cast<long long>(std::round(k));
    } else {
        os << k;
    }
    return os.str();
}

RobustnessReport scale_sweep(const SelectionResult& selection, const Model& model, const ExpressionDataset& raw_test,
                             std::span<const double> factors, std::size_t positive) {
    for (double c : factors) {
        if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("scale factors must be positive and finite");
    }
    RobustnessReport report;
    for (double c : factors) {
        const ExpressionDataset scaled = c == 1.0 ? raw_test : scale_values(raw_test, c);
        const auto predictions = predict_raw(selection, model, scaled);
        report.per_factor.push_back({c, factor_label(c), evaluate(predictions, raw_test.labels, positive)});
    }
    if (!report.per_factor.empty()) {
        const double k = static_cast<double>(report.per_factor.size());
        for (const auto& f : report.per_factor) {
            report.mean_sensitivity += f.metrics.sensitivity;
            report.mean_specificity += f.metrics.specificity;
            report.mean_precision += f.metrics.precision;
            report.mean_accuracy += f.metrics.accuracy;
        }
        report.mean_sensitivity /= k;
        report.mean_specificity /= k;
        report.mean_precision /= k;
        report.mean_accuracy /= k;
    }
    return report;
}

}  // namespace oncoclass
