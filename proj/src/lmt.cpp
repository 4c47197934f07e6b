#include <algorithm>
#include <numeric>

#include "boosting.hpp"
#include "oncoclass/classifiers_tree.hpp"
#include "oncoclass/kernels.hpp"

namespace oncoclass {

double LeafLogistic::score(std::span<const double> features) const { return bias + kernels::dot(weights, features); }

double LeafLogistic::prob_positive(std::span<const double> features) const {
    return boosting::prob_positive(score(features));
}

LeafLogistic fit_leaf_logistic(const TrainingSet& train, std::span<const std::size_t> samples, std::size_t max_iters,
                               double z_max) {
    const std::size_t d = train.feature_count();
    const std::size_t n = samples.size();
    LeafLogistic model;
    model.weights.assign(d, 0.0);

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = train.y[samples[i]] == 1 ? 1.0 : 0.0;
    std::vector<double> scores(n, 0.0);
    double dev = boosting::deviance(scores, y);
    model.deviance_trace.push_back(dev);

    std::vector<double> z;
    std::vector<double> w;
    std::vector<double> h(n);
    for (std::size_t it = 0; it < max_iters; ++it) {
        boosting::working_response(scores, y, z_max, z, w);
        const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
        double zbar = 0.0;
        for (std::size_t i = 0; i < n; ++i) zbar += w[i] * z[i];
        zbar /= wsum;

        // Best single-feature weighted least-squares fit z ~ a + b x.
        std::size_t best_f = d;
        double best_reduction = 0.0;
        double best_slope = 0.0;
        double best_intercept = zbar;
        for (std::size_t f = 0; f < d; ++f) {
            double xbar = 0.0;
            for (std::size_t i = 0; i < n; ++i) xbar += w[i] * train.x(samples[i], f);
            xbar /= wsum;
            double sxx = 0.0;
            double sxz = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dx = train.x(samples[i], f) - xbar;
                sxx += w[i] * dx * dx;
                sxz += w[i] * dx * (z[i] - zbar);
            }
            if (!(sxx > 1e-12 * wsum)) continue;
            const double slope = sxz / sxx;
            const double reduction = slope * sxz;
            if (reduction > best_reduction) {
                best_reduction = reduction;
                best_f = f;
                best_slope = slope;
                best_intercept = zbar - slope * xbar;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            h[i] = best_intercept + (best_f < d ? best_slope * train.x(samples[i], best_f) : 0.0);
        }
        const double step = boosting::accept_step(scores, h, y, 1.0, dev);
        if (step == 0.0) break;
        model.bias += step * best_intercept / 2.0;
        if (best_f < d) model.weights[best_f] += step * best_slope / 2.0;
        model.deviance_trace.push_back(dev);
    }
    return model;
}

Prediction LogisticModelTree::predict(std::span<const double> features) const {
    const double f = leaf_models[skeleton.leaf_of(features)].score(features);
    return Prediction::from_log_scores(-f, f);
}

LogisticModelTree train_lmt(const TrainingSet& train, const LmtOptions& options) {
    if (train.size() == 0) throw TrainingError("LMT: empty training set");
    std::vector<std::size_t> all(train.size());
    std::iota(all.begin(), all.end(), 0);

    LogisticModelTree m;
    TreeGrowOptions grow;
    grow.min_leaf = options.min_leaf;
    grow.min_split = std::max(options.min_split, 2 * options.min_leaf);
    m.skeleton = grow_tree(train, all, grow);

    std::vector<std::vector<std::size_t>> members(m.skeleton.nodes.size());
    for (auto s : all) members[m.skeleton.leaf_of(train.x.row(s))].push_back(s);
    m.leaf_models.resize(m.skeleton.nodes.size());
    for (std::size_t i = 0; i < m.skeleton.nodes.size(); ++i) {
        if (!m.skeleton.nodes[i].is_leaf()) continue;
        m.leaf_models[i] = fit_leaf_logistic(train, members[i], options.max_boost_iters, options.z_max);
    }
    return m;
}

}  // namespace oncoclass
