#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "oncoclass/model.hpp"

namespace oncoclass {

/// Gaussian naive Bayes over continuous features, evaluated in log space.
class NaiveBayesModel final : public Model {
  public:
    Prediction predict(std::span<const double> features) const override;

    /// Unnormalized per-class log posterior: log p(C) + sum_f log N(x_f; mu, var).
    std::array<double, 2> log_joint(std::span<const double> features) const;

    std::array<double, 2> prior;
    std::array<std::vector<double>, 2> mean;
    std::array<std::vector<double>, 2> variance;

  private:
    friend NaiveBayesModel train_naive_bayes(const TrainingSet&, double);
    void finalize();
    std::array<std::vector<double>, 2> half_inv_var_;
    std::array<double, 2> log_norm_{};
};

NaiveBayesModel train_naive_bayes(const TrainingSet& train, double variance_floor = 1e-9);

struct BayesNetOptions {
    std::size_t bins = 4;
    int max_parents = 2;  // feature parents per node, in addition to the class
    double ess = 1.0;     // pseudo-count added to every CPT cell
    std::size_t max_steps = 100000;
};

/// Discrete Bayesian network classifier. The class node is a parent of every
/// feature; structure among features is learned by BIC hill-climbing.
class BayesNetModel final : public Model {
  public:
    struct Node {
        std::vector<std::size_t> parents;  // feature parents (class is implicit)
        std::size_t arity = 1;
        // Row-major CPT: row index = class + 2 * (mixed-radix parent config), column = own value.
        std::vector<double> cpt;
    };

    Prediction predict(std::span<const double> features) const override;

    /// log P_B(class, x_1..x_n) for already-binned feature values.
    double log_joint(std::size_t cls, std::span<const std::size_t> bins) const;
    std::array<double, 2> class_log_scores(std::span<const std::size_t> bins) const;

    std::size_t cpt_row(std::size_t feature, std::size_t cls, std::span<const std::size_t> bins) const;
    std::size_t edge_count() const;
    bool is_acyclic() const;

    Discretizer discretizer;
    std::array<double, 2> class_prior{0.5, 0.5};
    std::vector<Node> nodes;
    std::vector<double> score_trace;  // BIC after each accepted move, starting with the naive structure
};

BayesNetModel train_bayes_net(const TrainingSet& train, const BayesNetOptions& options = {});

/// Same, on pre-discretized data: bins[i][f] for sample i, arity[f] values per feature.
BayesNetModel train_bayes_net_discrete(const std::vector<std::vector<std::size_t>>& bins,
                                       const std::vector<std::size_t>& arity,
                                       std::span<const std::size_t> labels, const BayesNetOptions& options);

}  // namespace oncoclass
