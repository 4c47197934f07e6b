#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "oncoclass/model.hpp"

namespace oncoclass {

/// Shannon entropy in bits of a class-count vector; 0 log 0 = 0.
double entropy(std::span<const double> counts);

/// C4.5 pessimistic extra-error estimate for a leaf covering n samples with
/// `errors` misclassified, at confidence factor cf.
double pessimistic_extra_errors(double n, double errors, double cf);

/// Binary tree over continuous features. Samples with value <= threshold go left.
class DecisionTree final : public Model {
  public:
    static constexpr std::size_t kLeaf = std::numeric_limits<std::size_t>::max();

    struct Node {
        std::size_t feature = kLeaf;
        double threshold = 0.0;
        std::size_t left = 0;
        std::size_t right = 0;
        std::array<double, 2> counts{0.0, 0.0};

        bool is_leaf() const { return feature == kLeaf; }
        double total() const { return counts[0] + counts[1]; }
    };

    Prediction predict(std::span<const double> features) const override;

    /// Index of the leaf a sample routes to.
    std::size_t leaf_of(std::span<const double> features) const;

    std::size_t leaf_count() const;
    std::size_t depth() const;

    /// Sum over leaves of (training errors + pessimistic extra errors).
    double pessimistic_error(double cf) const;

    std::vector<Node> nodes;  // root at index 0
};

struct TreeGrowOptions {
    std::size_t min_leaf = 2;   // minimum samples on each side of a split
    std::size_t min_split = 0;  // nodes with fewer samples are not split (0: 2 * min_leaf)
    std::size_t features_per_split = 0;  // 0 means all features
    std::size_t max_depth = 0;  // 0 means unlimited
};

/// Gain-ratio tree growth on the listed training samples (with repeats allowed).
/// `rng` is required when features_per_split restricts the candidates.
DecisionTree grow_tree(const TrainingSet& train, std::span<const std::size_t> samples,
                       const TreeGrowOptions& options, std::mt19937_64* rng = nullptr);

/// Bottom-up subtree replacement wherever a single leaf's pessimistic error
/// does not exceed that of the subtree.
void prune_pessimistic(DecisionTree& tree, double cf);

struct C45Options {
    std::size_t min_leaf = 2;
    double cf = 0.25;
    bool prune = true;
};

DecisionTree train_c45(const TrainingSet& train, const C45Options& options = {});

/// Linear logistic model: P(class 1 | x) = 1 / (1 + exp(-2 F(x))), F = bias + w.x.
struct LeafLogistic {
    double bias = 0.0;
    std::vector<double> weights;
    std::vector<double> deviance_trace;  // training negative log-likelihood per stage, stage 0 first

    double score(std::span<const double> features) const;
    double prob_positive(std::span<const double> features) const;
};

class LogisticModelTree final : public Model {
  public:
    Prediction predict(std::span<const double> features) const override;

    DecisionTree skeleton;
    std::vector<LeafLogistic> leaf_models;  // indexed by skeleton node index; empty for internal nodes
};

struct LmtOptions {
    std::size_t max_boost_iters = 50;
    std::size_t min_split = 15;
    std::size_t min_leaf = 2;
    double z_max = 4.0;
};

/// Boosts one-feature weighted linear regressions (LogitBoost) on the given samples.
LeafLogistic fit_leaf_logistic(const TrainingSet& train, std::span<const std::size_t> samples,
                               std::size_t max_iters, double z_max);

LogisticModelTree train_lmt(const TrainingSet& train, const LmtOptions& options = {});

class DecisionTableModel final : public Model {
  public:
    Prediction predict(std::span<const double> features) const override;

    /// Table key of a binned sample restricted to the selected features.
    std::uint64_t key(std::span<const double> features) const;

    Discretizer discretizer;
    std::vector<std::size_t> selected;  // ascending feature indices
    std::vector<std::pair<std::uint64_t, std::array<double, 2>>> table;  // sorted by key
    std::array<double, 2> class_counts{0.0, 0.0};
    std::size_t default_class = 0;
    double loo_accuracy = 0.0;       // objective of the chosen subset
    double baseline_accuracy = 0.0;  // objective of the empty subset
};

struct DecisionTableOptions {
    std::size_t bins = 4;
    std::size_t max_subset = 10;
    std::size_t max_stale = 5;  // non-improving expansions before the search stops
};

DecisionTableModel train_decision_table(const TrainingSet& train, const DecisionTableOptions& options = {});

/// Leave-one-out accuracy of a decision table over the given features of
/// binned data (bins[i][f]).
double decision_table_loo(const std::vector<std::vector<std::size_t>>& bins, std::span<const std::size_t> labels,
                          std::span<const std::size_t> features);

}  // namespace oncoclass
