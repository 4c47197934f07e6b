#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "oncoclass/classifiers_tree.hpp"
#include "oncoclass/model.hpp"

namespace oncoclass {

struct RandomForestOptions {
    std::size_t trees = 100;
    std::size_t features_per_split = 0;  // 0: ceil(sqrt(feature count))
    std::size_t min_leaf = 1;
    bool bootstrap = true;
    unsigned jobs = 1;
};

/// Unpruned gain-ratio trees on bootstrap samples; prediction is the
/// majority vote and the probabilities are vote fractions.
class RandomForestModel final : public Model {
  public:
    Prediction predict(std::span<const double> features) const override;

    std::vector<DecisionTree> trees;
    std::vector<std::uint64_t> tree_streams;  // per-tree RNG stream ids
    std::size_t features_per_split = 0;
};

RandomForestModel train_random_forest(const TrainingSet& train, const RandomForestOptions& options,
                                      const SeedSpec& seed);

/// Weighted least-squares regression stump.
struct RegressionStump {
    std::size_t feature = 0;
    double threshold = 0.0;
    double left = 0.0;   // value for x <= threshold
    double right = 0.0;  // value for x > threshold

    double eval(std::span<const double> features) const {
        return features[feature] <= threshold ? left : right;
    }
};

struct LogitBoostOptions {
    std::size_t stages = 100;
    double shrinkage = 1.0;
    double z_max = 4.0;
};

class LogitBoostModel final : public Model {
  public:
    Prediction predict(std::span<const double> features) const override;

    /// Additive score F(x) = sum_m step_m * stump_m(x) / 2.
    double score(std::span<const double> features) const;

    std::vector<RegressionStump> stumps;
    std::vector<double> steps;  // accepted step per stage, <= shrinkage
    double shrinkage = 1.0;
    std::vector<double> deviance_trace;  // training NLL before stage 1 and after each stage
};

LogitBoostModel train_logitboost(const TrainingSet& train, const LogitBoostOptions& options = {});

/// Best weighted least-squares stump for responses z with weights w over the
/// training rows. `order[f]` lists rows sorted by feature f.
RegressionStump fit_stump(const Matrix& x, const std::vector<std::vector<std::size_t>>& order,
                          std::span<const double> z, std::span<const double> w);

}  // namespace oncoclass
