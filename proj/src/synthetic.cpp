#include "oncoclass/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "oncoclass/model.hpp"

namespace oncoclass {

SyntheticData make_synthetic(const SyntheticSpec& spec, std::uint64_t gene_seed) {
    if (spec.planted > spec.genes) throw std::invalid_argument("more planted genes than genes");
    if (spec.positives == 0 || spec.negatives == 0) throw std::invalid_argument("both classes need samples");

    auto gene_rng = SeedSpec{gene_seed, 0}.engine();
    std::vector<std::size_t> order(spec.genes);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), gene_rng);
    std::vector<std::size_t> planted(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(spec.planted));
    std::ranges::sort(planted);
    std::vector<bool> is_planted(spec.genes, false);
    for (auto g : planted) is_planted[g] = true;

    std::uniform_real_distribution<double> baseline_dist(0.0, spec.max_baseline);
    std::uniform_real_distribution<double> spread_dist(spec.min_spread, spec.max_spread);
    std::vector<double> baseline(spec.genes);
    std::vector<double> spread(spec.genes);
    for (std::size_t g = 0; g < spec.genes; ++g) {
        baseline[g] = baseline_dist(gene_rng);
        spread[g] = spread_dist(gene_rng);
    }

    const std::size_t samples = spec.positives + spec.negatives;
    SyntheticData out;
    auto& ds = out.dataset;
    ds.label_names = {"Tumor", "Normal"};
    ds.values = Matrix(spec.genes, samples);
    for (std::size_t g = 0; g < spec.genes; ++g) ds.gene_ids.push_back("g" + std::to_string(g));
    for (std::size_t s = 0; s < samples; ++s) {
        ds.sample_ids.push_back("s" + std::to_string(s));
        ds.labels.push_back(s < spec.positives ? 0 : 1);
    }

    auto noise_rng = SeedSpec{spec.seed, 1}.engine();
    std::normal_distribution<double> noise(0.0, spec.noise_sd);
    for (std::size_t g = 0; g < spec.genes; ++g) {
        for (std::size_t s = 0; s < samples; ++s) {
            double z = noise(noise_rng);
            if (is_planted[g] && ds.labels[s] == 0) z += spec.mean_gap * spec.noise_sd;
            ds.values(g, s) = baseline[g] + spread[g] * z;
        }
    }
    out.planted_genes = std::move(planted);
    return out;
}

}  // namespace oncoclass
