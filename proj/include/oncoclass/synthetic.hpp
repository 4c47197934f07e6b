#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "oncoclass/dataset.hpp"

namespace oncoclass {

/// Planted-gene generator: `planted` genes get a class-mean gap of
/// `mean_gap` noise standard deviations, the rest are pure noise. Every gene
/// is then mapped to a raw-intensity scale with its own baseline and spread,
/// so robust normalization has real work to do.
struct SyntheticSpec {
    std::size_t genes = 5000;
    std::size_t planted = 50;
    std::size_t positives = 52;  // "Tumor" samples
    std::size_t negatives = 50;  // "Normal" samples
    double mean_gap = 2.0;
    double noise_sd = 1.0;
    /// Raw-scale draw: baseline ~ U(0, max_baseline), spread ~ U(min_spread, max_spread).
    double max_baseline = 1000.0;
    double min_spread = 20.0;
    double max_spread = 200.0;
    std::uint64_t seed = 1;
};

struct SyntheticData {
    ExpressionDataset dataset;
    std::vector<std::size_t> planted_genes;  // ascending
};

/// Draws a dataset. Labels are "Tumor" (first) and "Normal". Gene-level
/// parameters (which genes are planted, baselines, spreads) depend only on
/// `gene_seed`, so train and test sets drawn with the same gene_seed share them.
SyntheticData make_synthetic(const SyntheticSpec& spec, std::uint64_t gene_seed);

inline SyntheticData make_synthetic(const SyntheticSpec& spec) { return make_synthetic(spec, spec.seed); }

}  // namespace oncoclass
