#pragma once

// Two-class LogitBoost machinery shared by LogitBoost and the LMT leaves.
// Scores follow p = e^F / (e^F + e^-F) = 1 / (1 + e^{-2F}).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace oncoclass::boosting {

inline double prob_positive(double score) { return 1.0 / (1.0 + std::exp(-2.0 * score)); }

/// Bernoulli negative log-likelihood of the scores against y in {0,1}.
inline double deviance(std::span<const double> scores, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double m = (2.0 * y[i] - 1.0) * 2.0 * scores[i];
        // log(1 + e^{-m}) without overflow
        acc += m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
    }
    return acc;
}

/// Working responses and weights at the current scores.
inline void working_response(std::span<const double> scores, std::span<const double> y, double z_max,
                             std::vector<double>& z, std::vector<double>& w) {
    z.resize(scores.size());
    w.resize(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double p = prob_positive(scores[i]);
        const double pq = std::max(p * (1.0 - p), 1e-300);
        z[i] = std::clamp((y[i] - p) / pq, -z_max, z_max);
        w[i] = std::max(p * (1.0 - p), 1e-24);
    }
}

/// Largest step in {nu, nu/2, ...} for which F + step * h / 2 does not raise
/// the deviance; returns 0 if none of 30 halvings qualifies. `scores` is
/// updated in place with the accepted step.
inline double accept_step(std::vector<double>& scores, std::span<const double> h, std::span<const double> y,
                          double nu, double& current_deviance) {
    std::vector<double> trial(scores.size());
    double step = nu;
    for (int halving = 0; halving < 30; ++halving, step *= 0.5) {
        for (std::size_t i = 0; i < scores.size(); ++i) trial[i] = scores[i] + step * h[i] / 2.0;
        const double dev = deviance(trial, y);
        if (dev <= current_deviance) {
            scores.swap(trial);
            current_deviance = dev;
            return step;
        }
    }
    return 0.0;
}

}  // namespace oncoclass::boosting
