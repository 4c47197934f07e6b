#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oncoclass/dataset.hpp"

namespace oncoclass {

/// Class decision plus the per-class probability vector it came from.
struct Prediction {
    std::size_t label = 0;
    std::array<double, 2> probs{0.5, 0.5};

    /// Normalizes nonnegative scores to probabilities and takes the argmax;
    /// ties go to the lower class index. All-zero scores become uniform.
    static Prediction from_scores(double s0, double s1);

    /// Same, from per-class log scores (softmax).
    static Prediction from_log_scores(double l0, double l1);

    bool operator==(const Prediction&) const = default;
};

/// Fitted classifier. Immutable after training; predict is deterministic.
class Model {
  public:
    virtual ~Model() = default;
    virtual Prediction predict(std::span<const double> features) const = 0;

    std::vector<Prediction> predict_all(const Matrix& samples) const;
};

/// Deterministic RNG stream: the same (seed, stream) always produces the
/// same sequence, independent of threads.
struct SeedSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    std::mt19937_64 engine() const;
    SeedSpec child(std::uint64_t sub_stream) const;
};

/// Stable (platform independent) stream id for a name.
std::uint64_t stream_id(std::string_view name);

/// Flat string -> number hyperparameter bag with typed lookups and defaults.
class Params {
  public:
    Params() = default;
    explicit Params(std::map<std::string, double> values) : values_(std::move(values)) {}

    double get(const std::string& key, double fallback) const;
    std::size_t get_count(const std::string& key, std::size_t fallback) const;
    bool get_flag(const std::string& key, bool fallback) const;
    void set(const std::string& key, double value) { values_[key] = value; }

    const std::map<std::string, double>& values() const { return values_; }
    bool operator==(const Params&) const = default;

  private:
    std::map<std::string, double> values_;
};

/// Equal-frequency per-feature binning.
class Discretizer {
  public:
    Discretizer() = default;
    explicit Discretizer(std::vector<std::vector<double>> cuts) : cuts_(std::move(cuts)) {}

    std::size_t feature_count() const { return cuts_.size(); }
    std::size_t bins(std::size_t feature) const { return cuts_[feature].size() + 1; }
    const std::vector<double>& cuts(std::size_t feature) const { return cuts_[feature]; }

    /// Bin of a value: the number of cut points strictly below it.
    std::size_t bin(std::size_t feature, double value) const;
    std::vector<std::size_t> bin_row(std::span<const double> features) const;

  private:
    std::vector<std::vector<double>> cuts_;
};

/// Cut points at the j/k quantiles of each training feature, j = 1..k-1,
/// with duplicates collapsed.
Discretizer fit_discretizer(const TrainingSet& train, std::size_t k);

/// sqrt(1/(N*K) * sum_i sum_k (p_ik - y_ik)^2) against one-hot truth.
double rmse_probabilistic(std::span<const Prediction> predictions, std::span<const std::size_t> truth);

}  // namespace oncoclass
