#include <cmath>
#include <numeric>

#include "oncoclass/classifiers_ensemble.hpp"

namespace oncoclass {

Prediction RandomForestModel::predict(std::span<const double> features) const {
    std::array<double, 2> votes{0.0, 0.0};
    for (const auto& tree : trees) votes[tree.predict(features).label] += 1.0;
    return Prediction::from_scores(votes[0], votes[1]);
}

RandomForestModel train_random_forest(const TrainingSet& train, const RandomForestOptions& options,
                                      const SeedSpec& seed) {
    const std::size_t d = train.feature_count();
    if (options.trees < 1) throw TrainingError("random forest: need at least one tree");
    if (train.size() == 0) throw TrainingError("random forest: empty training set");
    std::size_t m = options.features_per_split;
    if (m == 0) m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    if (m < 1 || m > d) throw TrainingError("random forest: features per split must lie in [1, feature count]");

    RandomForestModel model;
    model.features_per_split = m;
    model.trees.resize(options.trees);
    model.tree_streams.resize(options.trees);
    for (std::size_t t = 0; t < options.trees; ++t) model.tree_streams[t] = seed.child(t).stream;

    TreeGrowOptions grow;
    grow.min_leaf = options.min_leaf;
    grow.features_per_split = m;
    const std::size_t n = train.size();
    parallel_for(options.trees, options.jobs, [&](std::size_t t) {
        auto rng = SeedSpec{seed.seed, model.tree_streams[t]}.engine();
        std::vector<std::size_t> sample(n);
        if (options.bootstrap) {
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (auto& s : sample) s = pick(rng);
        } else {
            std::iota(sample.begin(), sample.end(), 0);
        }
        model.trees[t] = grow_tree(train, sample, grow, &rng);
    });
    return model;
}

}  // namespace oncoclass
