#include <cmath>
#include <random>

#include "doctest.h"
#include "oncoclass/classifiers_prob.hpp"
#include "oncoclass/evaluation.hpp"
#include "oncoclass/synthetic.hpp"
#include "support.hpp"

using namespace oncoclass;

namespace {

ConfusionMatrix cm(std::size_t tp, std::size_t fn, std::size_t tn, std::size_t fp) { return {tp, fp, tn, fn}; }

struct Fitted {
    ExpressionDataset train, test;
    SelectionResult selection;
    NaiveBayesModel model;
};

Fitted fitted() {
    SyntheticSpec spec;
    spec.genes = 300;
    spec.planted = 20;
    spec.positives = 20;
    spec.negatives = 20;
    spec.mean_gap = 1.5;
    Fitted f;
    f.train = make_synthetic(spec, 5).dataset;
    spec.seed = 99;
    spec.positives = 15;
    spec.negatives = 9;
    f.test = make_synthetic(spec, 5).dataset;
    f.selection = select_genes(f.train, 0.01);
    f.model = train_naive_bayes(to_training_set(f.selection.transform(f.train)));
    return f;
}

}  // namespace

TEST_CASE("confusion counting") {
    const std::vector<std::size_t> truth{0, 0, 1, 1, 0};
    const auto all = confusion(std::span<const std::size_t>(truth), truth, 0);
    CHECK(all.fp == 0);
    CHECK(all.fn == 0);
    CHECK(all.tp == 3);
    CHECK(all.tn == 2);
    std::vector<std::size_t> flipped(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) flipped[i] = 1 - truth[i];
    const auto none = confusion(std::span<const std::size_t>(flipped), truth, 0);
    CHECK(none.tp == 0);
    CHECK(none.tn == 0);
    CHECK(none.total() == 5);
    CHECK_THROWS_AS(confusion(std::span<const std::size_t>(flipped), std::vector<std::size_t>{0}, 0), std::invalid_argument);
}

TEST_CASE("confusion by label name") {
    const std::vector<std::string> truth{"Tumor", "Tumor", "Normal"}, pred{"Tumor", "Normal", "Normal"};
    const auto c = confusion(pred, truth, "Tumor");
    CHECK(c == cm(1, 1, 1, 0));
    CHECK_THROWS_AS(confusion(pred, truth, "Benign"), std::invalid_argument);
    CHECK_THROWS_AS(confusion(pred, std::vector<std::string>{"Tumor"}, "Tumor"), std::invalid_argument);
}

TEST_CASE("metrics from published test outcomes") {
    const auto bn = metrics(cm(23, 2, 9, 0));
    CHECK(bn.sensitivity == 0.92);
    CHECK(bn.specificity == 1.0);
    CHECK(bn.precision == 1.0);
    CHECK(bn.accuracy == 32.0 / 34.0);
    CHECK(bn.ccs == 32);
    CHECK(bn.ics == 2);
    CHECK(bn.tpr[0] == 0.92);
    CHECK(bn.tpr[1] == 1.0);
    CHECK(bn.fpr[0] == 0.0);
    CHECK(bn.fpr[1] == 0.08);
    CHECK(metrics(cm(22, 3, 9, 0)).accuracy == 31.0 / 34.0);
    const auto c45 = metrics(cm(19, 6, 5, 4));
    CHECK(c45.accuracy == 24.0 / 34.0);
    CHECK(c45.specificity == 5.0 / 9.0);
    CHECK(c45.precision == 19.0 / 23.0);
}

TEST_CASE("vacuous denominators") {
    const auto no_pos = metrics(cm(0, 0, 5, 1));
    CHECK(no_pos.sensitivity == 1.0);
    CHECK(no_pos.sensitivity_vacuous);
    CHECK(no_pos.precision == 0.0);  // one false positive, no true ones
    CHECK_FALSE(no_pos.precision_vacuous);
    CHECK(no_pos.fpr[1] == 0.0);
    CHECK_FALSE(no_pos.specificity_vacuous);
    const auto no_neg = metrics(cm(3, 1, 0, 0));
    CHECK(no_neg.specificity == 1.0);
    CHECK(no_neg.specificity_vacuous);
    CHECK(no_neg.fpr[0] == 0.0);
    const auto none_called = metrics(cm(0, 4, 5, 0));
    CHECK(none_called.precision == 1.0);
    CHECK(none_called.precision_vacuous);
    CHECK(none_called.sensitivity == 0.0);
    CHECK_THROWS_AS(metrics(ConfusionMatrix{}), std::invalid_argument);
}

TEST_CASE("metric invariants on random confusion matrices") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const auto c = cm(rng() % 30, rng() % 30, rng() % 30, rng() % 30);
        if (c.total() == 0) continue;
        const auto m = metrics(c);
        CHECK(m.ccs + m.ics == c.total());
        CHECK(m.accuracy == static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total()));
        CHECK(m.sensitivity == m.tpr[0]);
        CHECK(m.specificity == m.tpr[1]);
        for (double v : {m.sensitivity, m.specificity, m.precision, m.accuracy, m.fpr[0], m.fpr[1]}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("evaluate attaches the rmse") {
    const std::vector<Prediction> preds{{0, {0.9, 0.1}}, {1, {0.2, 0.8}}, {0, {0.6, 0.4}}};
    const std::vector<std::size_t> truth{0, 1, 1};
    const auto m = evaluate(preds, truth, 0);
    REQUIRE(m.rmse.has_value());
    CHECK(*m.rmse == doctest::Approx(std::sqrt((2 * 0.01 + 2 * 0.04 + 2 * 0.36) / 6.0)));
    CHECK(m.cm == cm(1, 0, 1, 1));
}

TEST_CASE("factor labels") {
    CHECK(factor_label(0.5) == "Div 2");
    CHECK(factor_label(20) == "Mul 20");
    CHECK(factor_label(0.05) == "Div 20");
    CHECK(factor_label(1) == "Base");
    CHECK(default_scale_factors() == std::vector<double>{0.5, 2, 0.1, 10, 0.05, 20});
}

TEST_CASE("identity factor reproduces the base evaluation bit for bit") {
    const auto f = fitted();
    const auto base_preds = predict_raw(f.selection, f.model, f.test);
    const auto base = evaluate(base_preds, f.test.labels, 0);
    const std::vector<double> one{1.0};
    const auto sweep = scale_sweep(f.selection, f.model, f.test, one, 0);
    REQUIRE(sweep.per_factor.size() == 1);
    CHECK(sweep.per_factor[0].metrics == base);
    CHECK(sweep.mean_accuracy == base.accuracy);
}

TEST_CASE("six-factor sweep means are plain averages") {
    const auto f = fitted();
    const auto factors = default_scale_factors();
    const auto r = scale_sweep(f.selection, f.model, f.test, factors, 0);
    REQUIRE(r.per_factor.size() == 6);
    double sn = 0, sp = 0, pr = 0, ac = 0;
    for (const auto& x : r.per_factor) {
        sn += x.metrics.sensitivity, sp += x.metrics.specificity;
        pr += x.metrics.precision, ac += x.metrics.accuracy;
    }
    CHECK(std::fabs(r.mean_sensitivity - sn / 6) < 1e-12);
    CHECK(std::fabs(r.mean_specificity - sp / 6) < 1e-12);
    CHECK(std::fabs(r.mean_precision - pr / 6) < 1e-12);
    CHECK(std::fabs(r.mean_accuracy - ac / 6) < 1e-12);
    CHECK(r.per_factor[3].label == "Mul 10");
    const std::vector<double> bad{2.0, 0.0};
    CHECK_THROWS_AS(scale_sweep(f.selection, f.model, f.test, bad, 0), ConfigError);
}

TEST_CASE("scaling perturbs inputs under training params but not under refit params") {
    const auto f = fitted();
    const auto projected = project_genes(f.test, f.selection.keep);
    for (double c : default_scale_factors()) {
        const auto scaled = scale_values(f.test, c);
        // Refit regime: robust z-scores are scale invariant.
        const auto scaled_projected = project_genes(scaled, f.selection.keep);
        const auto a = apply_normalization(projected, fit_normalization(projected));
        const auto b = apply_normalization(scaled_projected, fit_normalization(scaled_projected));
        double max_gap = 0;
        for (std::size_t k = 0; k < a.values.data().size(); ++k) {
            max_gap = std::max(max_gap, std::fabs(a.values.data()[k] - b.values.data()[k]));
        }
        CHECK(max_gap < 1e-9);
        // Training-params regime: the classifier sees different inputs.
        const auto u = f.selection.transform(f.test);
        const auto v = f.selection.transform(scaled);
        double moved = 0;
        for (std::size_t k = 0; k < u.values.data().size(); ++k) {
            moved = std::max(moved, std::fabs(u.values.data()[k] - v.values.data()[k]));
        }
        CHECK(moved > 0.1);
    }
}
