#include <cmath>
#include <numbers>

#include "oncoclass/classifiers_prob.hpp"
#include "oncoclass/kernels.hpp"

namespace oncoclass {

void NaiveBayesModel::finalize() {
    for (std::size_t c = 0; c < 2; ++c) {
        const auto& var = variance[c];
        half_inv_var_[c].resize(var.size());
        double log_norm = std::log(prior[c]);
        for (std::size_t f = 0; f < var.size(); ++f) {
            half_inv_var_[c][f] = 0.5 / var[f];
            log_norm -= 0.5 * std::log(2.0 * std::numbers::pi * var[f]);
        }
        log_norm_[c] = log_norm;
    }
}

std::array<double, 2> NaiveBayesModel::log_joint(std::span<const double> features) const {
    std::array<double, 2> out{};
    for (std::size_t c = 0; c < 2; ++c) {
        out[c] = log_norm_[c] - kernels::weighted_sq_dist(features, mean[c], half_inv_var_[c]);
    }
    return out;
}

Prediction NaiveBayesModel::predict(std::span<const double> features) const {
    const auto lj = log_joint(features);
    return Prediction::from_log_scores(lj[0], lj[1]);
}

NaiveBayesModel train_naive_bayes(const TrainingSet& train, double variance_floor) {
    const auto totals = train.class_totals();
    if (totals[0] == 0 || totals[1] == 0) throw TrainingError("naive Bayes: a class has no training samples");
    if (!(variance_floor > 0.0)) throw TrainingError("naive Bayes: variance floor must be positive");

    const std::size_t d = train.feature_count();
    const auto n = static_cast<double>(train.size());
    NaiveBayesModel m;
    for (std::size_t c = 0; c < 2; ++c) {
        m.prior[c] = static_cast<double>(totals[c]) / n;
        m.mean[c].assign(d, 0.0);
        m.variance[c].assign(d, 0.0);
    }
    for (std::size_t i = 0; i < train.size(); ++i) kernels::axpy(1.0, train.x.row(i), m.mean[train.y[i]]);
    for (std::size_t c = 0; c < 2; ++c) {
        for (double& v : m.mean[c]) v /= static_cast<double>(totals[c]);
    }
    for (std::size_t i = 0; i < train.size(); ++i) {
        const auto c = train.y[i];
        const auto row = train.x.row(i);
        for (std::size_t f = 0; f < d; ++f) {
            const double dev = row[f] - m.mean[c][f];
            m.variance[c][f] += dev * dev;
        }
    }
    for (std::size_t c = 0; c < 2; ++c) {
        const double denom = totals[c] > 1 ? static_cast<double>(totals[c] - 1) : 1.0;
        for (double& v : m.variance[c]) v = std::max(v / denom, variance_floor);
    }
    m.finalize();
    return m;
}

}  // namespace oncoclass
