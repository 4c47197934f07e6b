#include <algorithm>
#include <cmath>
#include <numeric>

#include "oncoclass/classifiers_optim.hpp"
#include "oncoclass/kernels.hpp"

namespace oncoclass {

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

std::array<double, 2> class_scores(std::span<const double> chromosome, std::span<const double> x) {
    const std::size_t d = x.size();
    std::array<double, 2> s{};
    for (std::size_t c = 0; c < 2; ++c) {
        s[c] = sigmoid(kernels::dot(chromosome.subspan(c * (d + 1), d), x) + chromosome[c * (d + 1) + d]);
    }
    return s;
}

}  // namespace

double ga_fitness(std::span<const double> chromosome, const TrainingSet& train) {
    const std::size_t d = train.feature_count();
    if (chromosome.size() != 2 * (d + 1)) throw std::invalid_argument("chromosome length does not match features");
    double acc = 0.0;
    for (std::size_t i = 0; i < train.size(); ++i) {
        const auto s = class_scores(chromosome, train.x.row(i));
        for (std::size_t c = 0; c < 2; ++c) {
            const double e = s[c] - (train.y[i] == c ? 1.0 : 0.0);
            acc += e * e;
        }
    }
    return acc / (2.0 * static_cast<double>(train.size()));
}

Prediction GaModel::predict(std::span<const double> x) const {
    const auto s = class_scores(chromosome, x);
    return Prediction::from_scores(s[0], s[1]);
}

GaModel train_ga(const TrainingSet& train, const GaOptions& options, const SeedSpec& seed) {
    if (options.population < 2) throw TrainingError("GA: population must be at least 2");
    if (options.generations < 1) throw TrainingError("GA: need at least one generation");
    if (train.size() == 0) throw TrainingError("GA: empty training set");

    const std::size_t d = train.feature_count();
    const std::size_t genes = 2 * (d + 1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(d, 1)));
    auto rng = seed.engine();
    std::normal_distribution<double> init(0.0, options.init_scale * scale);
    std::normal_distribution<double> mutation(0.0, options.mutation_scale * scale);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, options.population - 1);

    using Chromosome = std::vector<double>;
    std::vector<Chromosome> population;
    population.reserve(options.population);
    for (const auto& c : options.seed_chromosomes) {
        if (c.size() != genes) throw TrainingError("GA: seed chromosome has the wrong length");
        if (population.size() < options.population) population.push_back(c);
    }
    while (population.size() < options.population) {
        Chromosome c(genes);
        for (double& g : c) g = init(rng);
        population.push_back(std::move(c));
    }

    std::vector<double> fitness(options.population);
    GaModel model;
    model.features = d;
    const auto evaluate = [&](std::size_t generation) {
        for (std::size_t i = 0; i < population.size(); ++i) fitness[i] = ga_fitness(population[i], train);
        const auto best = static_cast<std::size_t>(std::ranges::min_element(fitness) - fitness.begin());
        const double avg = std::accumulate(fitness.begin(), fitness.end(), 0.0) / static_cast<double>(fitness.size());
        model.trace.push_back({generation, fitness[best], avg});
        return best;
    };
    const auto tournament = [&] {
        const std::size_t a = pick(rng);
        const std::size_t b = pick(rng);
        if (fitness[a] < fitness[b]) return a;
        if (fitness[b] < fitness[a]) return b;
        return std::min(a, b);
    };

    std::size_t best = evaluate(1);
    for (std::size_t gen = 2; gen <= options.generations; ++gen) {
        std::vector<Chromosome> next;
        next.reserve(options.population);
        next.push_back(population[best]);
        while (next.size() < options.population) {
            const auto& pa = population[tournament()];
            const auto& pb = population[tournament()];
            Chromosome child = pa;
            if (unit(rng) < options.crossover_rate) {
                for (std::size_t g = 0; g < genes; ++g) {
                    if (unit(rng) < 0.5) child[g] = pb[g];
                }
            }
            for (double& g : child) {
                if (unit(rng) < options.mutation_rate) g += mutation(rng);
            }
            next.push_back(std::move(child));
        }
        population = std::move(next);
        best = evaluate(gen);
    }
    model.chromosome = population[best];
    model.best_fitness = fitness[best];
    return model;
}

}  // namespace oncoclass
