#include <algorithm>
#include <cmath>
#include <numeric>

#include "oncoclass/classifiers_optim.hpp"
#include "oncoclass/kernels.hpp"

namespace oncoclass {

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

MlpModel::MlpModel(std::size_t inputs, std::size_t hidden)
    : inputs_(inputs), hidden_(hidden), params_(hidden * inputs + hidden + 2 * hidden + 2, 0.0) {}

void MlpModel::forward(std::span<const double> x, std::span<double> hidden, std::span<double, 2> out) const {
    const std::span<const double> p = params_;
    for (std::size_t h = 0; h < hidden_; ++h) {
        hidden[h] = sigmoid(kernels::dot(p.subspan(w1() + h * inputs_, inputs_), x) + p[b1() + h]);
    }
    for (std::size_t k = 0; k < 2; ++k) {
        out[k] = sigmoid(kernels::dot(p.subspan(w2() + k * hidden_, hidden_), hidden) + p[b2() + k]);
    }
}

Prediction MlpModel::predict(std::span<const double> features) const {
    std::vector<double> hidden(hidden_);
    std::array<double, 2> out{};
    forward(features, hidden, out);
    return Prediction::from_scores(out[0], out[1]);
}

double MlpModel::loss(const TrainingSet& data) const {
    std::vector<double> hidden(hidden_);
    std::array<double, 2> out{};
    double acc = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        forward(data.x.row(i), hidden, out);
        for (std::size_t k = 0; k < 2; ++k) {
            const double d = out[k] - (data.y[i] == k ? 1.0 : 0.0);
            acc += 0.5 * d * d;
        }
    }
    return acc;
}

void MlpModel::accumulate_gradient(std::span<const double> x, std::size_t label, std::span<double> hidden,
                                   std::span<double> grad) const {
    std::array<double, 2> out{};
    forward(x, hidden, out);
    std::array<double, 2> delta_out{};
    for (std::size_t k = 0; k < 2; ++k) {
        const double target = label == k ? 1.0 : 0.0;
        delta_out[k] = (out[k] - target) * out[k] * (1.0 - out[k]);
        kernels::axpy(delta_out[k], hidden, grad.subspan(w2() + k * hidden_, hidden_));
        grad[b2() + k] += delta_out[k];
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
        const double back = delta_out[0] * params_[w2() + h] + delta_out[1] * params_[w2() + hidden_ + h];
        const double delta_h = back * hidden[h] * (1.0 - hidden[h]);
        kernels::axpy(delta_h, x, grad.subspan(w1() + h * inputs_, inputs_));
        grad[b1() + h] += delta_h;
    }
}

std::vector<double> MlpModel::gradient(const TrainingSet& data) const {
    std::vector<double> grad(params_.size(), 0.0);
    std::vector<double> hidden(hidden_);
    for (std::size_t i = 0; i < data.size(); ++i) accumulate_gradient(data.x.row(i), data.y[i], hidden, grad);
    return grad;
}

MlpModel train_mlp(const TrainingSet& train, const MlpOptions& options, const SeedSpec& seed) {
    if (options.hidden < 1) throw TrainingError("MLP: need at least one hidden unit");
    if (options.epochs < 1) throw TrainingError("MLP: need at least one epoch");
    if (train.size() == 0) throw TrainingError("MLP: empty training set");

    const std::size_t d = train.feature_count();
    MlpModel m(d, options.hidden);
    m.options = options;
    auto rng = seed.engine();
    {
        const double r1 = options.init_scale / std::sqrt(static_cast<double>(std::max<std::size_t>(d, 1)));
        const double r2 = options.init_scale / std::sqrt(static_cast<double>(options.hidden));
        std::uniform_real_distribution<double> u1(-r1, r1);
        std::uniform_real_distribution<double> u2(-r2, r2);
        auto p = m.params();
        for (std::size_t i = 0; i < m.w2(); ++i) p[i] = u1(rng);
        for (std::size_t i = m.w2(); i < p.size(); ++i) p[i] = u2(rng);
    }

    std::vector<double> grad(m.params_.size());
    std::vector<double> velocity(m.params_.size(), 0.0);
    std::vector<double> hidden(options.hidden);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (auto i : order) {
            std::fill(grad.begin(), grad.end(), 0.0);
            m.accumulate_gradient(train.x.row(i), train.y[i], hidden, grad);
            for (double& v : velocity) v *= options.momentum;
            kernels::axpy(-options.learning_rate, grad, velocity);
            kernels::axpy(1.0, velocity, m.params_);
        }
    }
    const auto predictions = m.predict_all(train.x);
    m.train_rmse = rmse_probabilistic(predictions, train.y);
    return m;
}

}  // namespace oncoclass
