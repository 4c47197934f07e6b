#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oncoclass/model.hpp"

namespace oncoclass {

// ---------------------------------------------------------------------------
// SMO-trained linear soft-margin SVM

struct SvmOptions {
    double c = 1.0;
    double tol = 1e-3;
    std::size_t max_passes = 1;       // consecutive change-free full sweeps before stopping
    std::size_t max_sweeps = 100000;  // hard cap on outer-loop sweeps
    bool record_objective = false;
};

/// Decision f(x) = w.x + b; class 1 is the +1 side. Probabilities come from
/// a fixed logistic of the margin with slope 2.
class SvmModel final : public Model {
  public:
    Prediction predict(std::span<const double> features) const override;
    double decision(std::span<const double> features) const;

    std::vector<double> alpha;   // one per training sample, in [0, C]
    std::vector<double> y;       // +1 / -1 per training sample
    Matrix support_vectors;      // rows with alpha > 0
    std::vector<double> weights; // w = sum alpha_i y_i x_i
    double bias = 0.0;
    double c = 1.0;
    std::size_t sweeps = 0;
    std::vector<double> objective_trace;  // dual objective after each accepted pair update
};

SvmModel train_smo_svm(const TrainingSet& train, const SvmOptions& options = {});

/// Dual objective sum(alpha) - 0.5 ||w||^2 for the linear kernel.
double svm_dual_objective(const SvmModel& model);

// ---------------------------------------------------------------------------
// Multilayer perceptron

struct MlpOptions {
    std::size_t hidden = 16;
    double learning_rate = 0.3;
    double momentum = 0.2;
    std::size_t epochs = 500;
    double init_scale = 1.0;  // weights ~ U(-s/sqrt(fan_in), s/sqrt(fan_in))
};

/// One sigmoid hidden layer, two sigmoid outputs (one per class), trained by
/// per-sample backpropagation on the squared error 0.5 * sum_k (o_k - t_k)^2.
class MlpModel final : public Model {
  public:
    MlpModel() = default;
    MlpModel(std::size_t inputs, std::size_t hidden);

    Prediction predict(std::span<const double> features) const override;

    /// Forward pass; fills hidden activations and the two outputs.
    void forward(std::span<const double> x, std::span<double> hidden, std::span<double, 2> out) const;

    /// 0.5 * sum over samples and outputs of squared error.
    double loss(const TrainingSet& data) const;

    /// Gradient of loss() with respect to params(), summed over samples.
    std::vector<double> gradient(const TrainingSet& data) const;

    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }

    std::size_t inputs() const { return inputs_; }
    std::size_t hidden_units() const { return hidden_; }

    MlpOptions options;
    double train_rmse = 0.0;

  private:
    friend MlpModel train_mlp(const TrainingSet&, const MlpOptions&, const SeedSpec&);

    // Layout: W1 (hidden x inputs), b1 (hidden), W2 (2 x hidden), b2 (2).
    std::size_t w1() const { return 0; }
    std::size_t b1() const { return hidden_ * inputs_; }
    std::size_t w2() const { return b1() + hidden_; }
    std::size_t b2() const { return w2() + 2 * hidden_; }

    void accumulate_gradient(std::span<const double> x, std::size_t label, std::span<double> hidden,
                             std::span<double> grad) const;

    std::size_t inputs_ = 0;
    std::size_t hidden_ = 0;
    std::vector<double> params_;
};

MlpModel train_mlp(const TrainingSet& train, const MlpOptions& options, const SeedSpec& seed);

// ---------------------------------------------------------------------------
// Genetic algorithm over linear scorer weights

struct GaOptions {
    std::size_t population = 50;
    std::size_t generations = 10;
    double crossover_rate = 0.9;
    double mutation_rate = 0.05;
    double init_scale = 1.0;      // initial genes ~ N(0, init_scale / sqrt(features))
    double mutation_scale = 1.0;  // mutation noise ~ N(0, mutation_scale / sqrt(features))
    std::vector<std::vector<double>> seed_chromosomes;  // placed first in the initial population
};

struct GaGeneration {
    std::size_t generation = 0;  // 1-based
    double best_mse = 0.0;
    double avg_mse = 0.0;
    bool operator==(const GaGeneration&) const = default;
};

/// Chromosome layout: for each class c, (features) weights then a bias.
/// The class-c probability is the class's logistic score normalized over classes.
class GaModel final : public Model {
  public:
    Prediction predict(std::span<const double> features) const override;

    std::vector<double> chromosome;
    std::size_t features = 0;
    double best_fitness = 0.0;
    std::vector<GaGeneration> trace;
};

/// Mean over samples and classes of (sigmoid(score_c) - onehot_c)^2.
double ga_fitness(std::span<const double> chromosome, const TrainingSet& train);

GaModel train_ga(const TrainingSet& train, const GaOptions& options, const SeedSpec& seed);

}  // namespace oncoclass
