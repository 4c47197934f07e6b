#include "oncoclass/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oncoclass/preprocess.hpp"

namespace oncoclass {

Prediction Prediction::from_scores(double s0, double s1) {
    Prediction p;
    const double total = s0 + s1;
    if (!(total > 0.0) || !std::isfinite(total)) {
        p.probs = {0.5, 0.5};
    } else {
        p.probs = {s0 / total, s1 / total};
    }
    p.label = p.probs[1] > p.probs[0] ? 1 : 0;
    return p;
}

Prediction Prediction::from_log_scores(double l0, double l1) {
    const double hi = std::max(l0, l1);
    if (!std::isfinite(hi)) return from_scores(1.0, 1.0);
    return from_scores(std::exp(l0 - hi), std::exp(l1 - hi));
}

std::vector<Prediction> Model::predict_all(const Matrix& samples) const {
    std::vector<Prediction> out;
    out.reserve(samples.rows());
    for (std::size_t i = 0; i < samples.rows(); ++i) out.push_back(predict(samples.row(i)));
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::mt19937_64 SeedSpec::engine() const {
    std::uint64_t state = seed ^ (stream * 0xD1B54A32D192ED03ULL);
    std::seed_seq seq{splitmix64(state), splitmix64(state), splitmix64(state), splitmix64(state)};
    return std::mt19937_64(seq);
}

SeedSpec SeedSpec::child(std::uint64_t sub_stream) const {
    std::uint64_t state = stream ^ (sub_stream + 0x632BE59BD9B4E019ULL);
    return SeedSpec{seed, splitmix64(state)};
}

std::uint64_t stream_id(std::string_view name) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double Params::get(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::size_t Params::get_count(const std::string& key, std::size_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (!(it->second >= 0.0) || it->second != std::floor(it->second)) {
        throw ConfigError("parameter '" + key + "' must be a nonnegative integer");
    }
    return static_cast<std::size_t>(it->second);
}

bool Params::get_flag(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second != 0.0;
}

std::size_t Discretizer::bin(std::size_t feature, double value) const {
    const auto& c = cuts_[feature];
    return static_cast<std::size_t>(std::lower_bound(c.begin(), c.end(), value) - c.begin());
}

std::vector<std::size_t> Discretizer::bin_row(std::span<const double> features) const {
    std::vector<std::size_t> out(features.size());
    for (std::size_t f = 0; f < features.size(); ++f) out[f] = bin(f, features[f]);
    return out;
}

Discretizer fit_discretizer(const TrainingSet& train, std::size_t k) {
    if (k < 2) throw std::invalid_argument("discretizer needs k >= 2 bins");
    if (train.size() == 0) throw std::invalid_argument("discretizer needs training samples");
    std::vector<std::vector<double>> cuts(train.feature_count());
    std::vector<double> column(train.size());
    for (std::size_t f = 0; f < train.feature_count(); ++f) {
        for (std::size_t i = 0; i < train.size(); ++i) column[i] = train.x(i, f);
        std::ranges::sort(column);
        auto& c = cuts[f];
        for (std::size_t j = 1; j < k; ++j) {
            const double q = quantile(column, static_cast<double>(j) / static_cast<double>(k));
            if (q >= column.back()) break;
            // Keep a cut only if the bin it closes, (previous cut, q], holds training values.
            const auto lo = c.empty() ? column.begin()
                                      : std::upper_bound(column.begin(), column.end(), c.back());
            if (lo != column.end() && *lo <= q) c.push_back(q);
        }
    }
    return Discretizer(std::move(cuts));
}

double rmse_probabilistic(std::span<const Prediction> predictions, std::span<const std::size_t> truth) {
    if (predictions.size() != truth.size()) throw std::invalid_argument("prediction/truth length mismatch");
    if (predictions.empty()) throw std::invalid_argument("rmse of an empty prediction list");
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        for (std::size_t k = 0; k < 2; ++k) {
            const double y = truth[i] == k ? 1.0 : 0.0;
            const double d = predictions[i].probs[k] - y;
            acc += d * d;
        }
    }
    return std::sqrt(acc / (2.0 * static_cast<double>(predictions.size())));
}

}  // namespace oncoclass
