#include <algorithm>
#include <limits>
#include <numeric>

#include "boosting.hpp"
#include "oncoclass/classifiers_ensemble.hpp"

namespace oncoclass {

RegressionStump fit_stump(const Matrix& x, const std::vector<std::vector<std::size_t>>& order,
                          std::span<const double> z, std::span<const double> w) {
    double total_w = 0.0;
    double total_wz = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        total_w += w[i];
        total_wz += w[i] * z[i];
    }
    const double mean = total_w > 0.0 ? total_wz / total_w : 0.0;
    RegressionStump best{0, 0.0, mean, mean};
    if (x.cols() > 0) best.threshold = std::numeric_limits<double>::infinity();
    // Minimizing weighted SSE is maximizing S_L^2 / W_L + S_R^2 / W_R.
    double best_gain = total_w > 0.0 ? total_wz * total_wz / total_w : 0.0;
    for (std::size_t f = 0; f < x.cols(); ++f) {
        const auto& idx = order[f];
        double wl = 0.0;
        double sl = 0.0;
        for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
            wl += w[idx[k]];
            sl += w[idx[k]] * z[idx[k]];
            const double lo = x(idx[k], f);
            const double hi = x(idx[k + 1], f);
            if (lo == hi) continue;
            const double wr = total_w - wl;
            if (!(wl > 0.0) || !(wr > 0.0)) continue;
            const double sr = total_wz - sl;
            const double gain = sl * sl / wl + sr * sr / wr;
            if (gain > best_gain * (1.0 + 1e-12) + 1e-300) {
                best_gain = gain;
                double mid = lo + (hi - lo) / 2.0;
                if (!(mid >= lo && mid < hi)) mid = lo;
                best = RegressionStump{f, mid, sl / wl, sr / wr};
            }
        }
    }
    return best;
}

double LogitBoostModel::score(std::span<const double> features) const {
    double f = 0.0;
    for (std::size_t m = 0; m < stumps.size(); ++m) f += steps[m] * stumps[m].eval(features) / 2.0;
    return f;
}

Prediction LogitBoostModel::predict(std::span<const double> features) const {
    // Softmax of (-F, F) keeps both tails representable.
    const double f = score(features);
    return Prediction::from_log_scores(-f, f);
}

LogitBoostModel train_logitboost(const TrainingSet& train, const LogitBoostOptions& options) {
    if (options.stages < 1) throw TrainingError("LogitBoost: need at least one stage");
    if (train.size() == 0) throw TrainingError("LogitBoost: empty training set");
    if (!(options.shrinkage >= 0.0)) throw TrainingError("LogitBoost: shrinkage must be nonnegative");
    const std::size_t n = train.size();

    std::vector<std::vector<std::size_t>> order(train.feature_count(), std::vector<std::size_t>(n));
    for (std::size_t f = 0; f < train.feature_count(); ++f) {
        auto& idx = order[f];
        std::iota(idx.begin(), idx.end(), 0);
        std::ranges::stable_sort(idx, [&](std::size_t a, std::size_t b) { return train.x(a, f) < train.x(b, f); });
    }

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = train.y[i] == 1 ? 1.0 : 0.0;

    LogitBoostModel model;
    model.shrinkage = options.shrinkage;
    std::vector<double> scores(n, 0.0);
    double dev = boosting::deviance(scores, y);
    model.deviance_trace.push_back(dev);

    std::vector<double> z;
    std::vector<double> w;
    std::vector<double> h(n);
    for (std::size_t m = 0; m < options.stages; ++m) {
        boosting::working_response(scores, y, options.z_max, z, w);
        const RegressionStump stump = fit_stump(train.x, order, z, w);
        for (std::size_t i = 0; i < n; ++i) h[i] = stump.eval(train.x.row(i));
        const double step = boosting::accept_step(scores, h, y, options.shrinkage, dev);
        model.stumps.push_back(stump);
        model.steps.push_back(step);
        model.deviance_trace.push_back(dev);
    }
    return model;
}

}  // namespace oncoclass
