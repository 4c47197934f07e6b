#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "oncoclass/dataset.hpp"

namespace oncoclass {

/// Linear-interpolation quantile on the sorted values, h = (n-1)q.
/// Throws std::invalid_argument on an empty list, non-finite values, or q outside [0,1].
double quantile(std::span<const double> xs, double q);

/// Q3 - Q1 under the same convention as quantile().
double iqr(std::span<const double> xs);

/// Per-gene median and IQR, always fit on training data.
struct NormalizationParams {
    std::vector<double> median;
    std::vector<double> iqr;

    std::size_t size() const { return median.size(); }
    NormalizationParams project(const std::vector<std::size_t>& keep) const;

    bool operator==(const NormalizationParams&) const = default;
};

NormalizationParams fit_normalization(const ExpressionDataset& train);

/// value' = (value - median_g) / iqr_g. Throws DataError if a gene has iqr 0
/// or the gene count does not match.
ExpressionDataset apply_normalization(const ExpressionDataset& ds, const NormalizationParams& params);

/// Pooled two-sample t statistic and its standard error core S_x1x2.
struct TStatistic {
    double t = 0.0;
    double pooled_sd = 0.0;
};

/// Returns nullopt for a degenerate gene (S == 0). Both samples need >= 2 values.
std::optional<TStatistic> t_statistic(std::span<const double> x1, std::span<const double> x2);

/// 2 * P(T_df >= |t|).
double p_value_two_tailed(double t, double df);

enum class GeneStatus { kTested, kZeroIqr, kDegenerate };

struct TTestResult {
    std::vector<double> t;
    std::vector<double> pooled_sd;
    std::vector<double> p;  // 1.0 for genes that were not tested
    std::vector<GeneStatus> status;
    std::size_t df = 0;
};

struct SelectionResult {
    std::vector<std::size_t> keep;  // ascending indices into the fitting dataset
    std::vector<std::string> gene_ids;  // all genes of the fitting dataset
    double alpha = 0.0;
    TTestResult ttest;
    NormalizationParams norm;  // all genes of the fitting dataset

    std::size_t genes_before() const { return norm.size(); }
    std::size_t genes_after() const { return keep.size(); }

    /// Projects `ds` onto the kept genes and normalizes it with the training
    /// parameters. `ds` must have the gene layout of the fitting dataset.
    ExpressionDataset transform(const ExpressionDataset& ds) const;
};

/// Normalize, drop zero-IQR genes, pooled t-test between the two label
/// groups, keep genes with p < alpha.
SelectionResult select_genes(const ExpressionDataset& train, double alpha);

}  // namespace oncoclass
