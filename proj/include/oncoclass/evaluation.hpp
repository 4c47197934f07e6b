#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oncoclass/model.hpp"
#include "oncoclass/preprocess.hpp"

namespace oncoclass {

/// Binary confusion counts with a designated positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                          std::size_t positive);
ConfusionMatrix confusion(std::span<const Prediction> predicted, std::span<const std::size_t> truth,
                          std::size_t positive);
/// Label-name variant; `positive` must occur among the truth or predicted labels.
ConfusionMatrix confusion(const std::vector<std::string>& predicted, const std::vector<std::string>& truth,
                          const std::string& positive);

struct MetricSet {
    ConfusionMatrix cm;
    double sensitivity = 0.0;  // TP / (TP + FN)
    double specificity = 0.0;  // TN / (TN + FP)
    double precision = 0.0;    // TP / (TP + FP)
    double accuracy = 0.0;     // (TP + TN) / total
    // Per-class rates, index 0 = positive class, 1 = negative class.
    std::array<double, 2> tpr{0.0, 0.0};
    std::array<double, 2> fpr{0.0, 0.0};
    std::optional<double> rmse;
    std::size_t ccs = 0;
    std::size_t ics = 0;
    // Set when the denominator was zero and the value 1.0 is a convention.
    bool sensitivity_vacuous = false;
    bool specificity_vacuous = false;
    bool precision_vacuous = false;

    bool operator==(const MetricSet&) const = default;
};

/// Sensitivity, specificity, precision and accuracy from counts. A zero
/// denominator yields 1.0 (nothing to find, nothing missed) and sets the
/// matching vacuous flag; the false-positive rates use 0.0 in that case.
MetricSet metrics(const ConfusionMatrix& cm);

/// metrics() plus the probabilistic RMSE of the predictions.
MetricSet evaluate(std::span<const Prediction> predictions, std::span<const std::size_t> truth,
                   std::size_t positive);

/// Applies the training selection to a raw dataset and scores the model on it.
std::vector<Prediction> predict_raw(const SelectionResult& selection, const Model& model,
                                    const ExpressionDataset& raw);

struct FactorResult {
    double factor = 1.0;
    std::string label;  // "Div 2", "Mul 10", ...
    MetricSet metrics;
    bool operator==(const FactorResult&) const = default;
};

struct RobustnessReport {
    std::vector<FactorResult> per_factor;
    double mean_sensitivity = 0.0;
    double mean_specificity = 0.0;
    double mean_precision = 0.0;
    double mean_accuracy = 0.0;
    bool operator==(const RobustnessReport&) const = default;
};

/// Div 2, Mul 2, Div 10, Mul 10, Div 20, Mul 20.
std::vector<double> default_scale_factors();

/// "Div k" for factors below 1, "Mul k" above, "Base" for 1.
std::string factor_label(double factor);

/// For every factor: multiply the raw test matrix, project and normalize it
/// with the training parameters (never refit), predict, and score.
RobustnessReport scale_sweep(const SelectionResult& selection, const Model& model, const ExpressionDataset& raw_test,
                             std::span<const double> factors, std::size_t positive);

}  // namespace oncoclass
