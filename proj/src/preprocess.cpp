#include "oncoclass/preprocess.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

#include "oncoclass/kernels.hpp"

namespace oncoclass {

namespace {

double sorted_quantile(std::span<const double> sorted, double q) {
    const std::size_t n = sorted.size();
    if (q <= 0.0) return sorted.front();
    if (q >= 1.0) return sorted.back();
    const double h = static_cast<double>(n - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= n) return sorted[n - 1];
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> sorted_copy(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("quantile of an empty list");
    std::vector<double> v(xs.begin(), xs.end());
    for (double x : v) {
        if (!std::isfinite(x)) throw std::invalid_argument("quantile of a non-finite value");
    }
    std::ranges::sort(v);
    return v;
}

}  // namespace

double quantile(std::span<const double> xs, double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level outside [0,1]");
    const auto v = sorted_copy(xs);
    return sorted_quantile(v, q);
}

double iqr(std::span<const double> xs) {
    const auto v = sorted_copy(xs);
    return sorted_quantile(v, 0.75) - sorted_quantile(v, 0.25);
}

NormalizationParams NormalizationParams::project(const std::vector<std::size_t>& keep) const {
    NormalizationParams out;
    out.median.reserve(keep.size());
    out.iqr.reserve(keep.size());
    for (auto g : keep) {
        out.median.push_back(median.at(g));
        out.iqr.push_back(iqr.at(g));
    }
    return out;
}

NormalizationParams fit_normalization(const ExpressionDataset& train) {
    if (train.sample_count() < 2) throw DataError("normalization needs at least 2 samples");
    NormalizationParams p;
    p.median.resize(train.gene_count());
    p.iqr.resize(train.gene_count());
    for (std::size_t g = 0; g < train.gene_count(); ++g) {
        const auto v = sorted_copy(train.values.row(g));
        p.median[g] = sorted_quantile(v, 0.5);
        p.iqr[g] = sorted_quantile(v, 0.75) - sorted_quantile(v, 0.25);
    }
    return p;
}

ExpressionDataset apply_normalization(const ExpressionDataset& ds, const NormalizationParams& params) {
    if (params.size() != ds.gene_count()) {
        throw DataError("normalization parameters cover " + std::to_string(params.size()) +
                        " genes, dataset has " + std::to_string(ds.gene_count()));
    }
    ExpressionDataset out = ds;
    for (std::size_t g = 0; g < ds.gene_count(); ++g) {
        const double scale = params.iqr[g];
        if (!(scale > 0.0)) throw DataError("zero-IQR gene '" + ds.gene_ids[g] + "' cannot be normalized");
        const double center = params.median[g];
        for (double& v : out.values.row(g)) v = (v - center) / scale;
    }
    return out;
}

std::optional<TStatistic> t_statistic(std::span<const double> x1, std::span<const double> x2) {
    if (x1.size() < 2 || x2.size() < 2) throw std::invalid_argument("t statistic needs >= 2 values per group");
    const double n1 = static_cast<double>(x1.size());
    const double n2 = static_cast<double>(x2.size());
    const double mean1 = kernels::sum(x1) / n1;
    const double mean2 = kernels::sum(x2) / n2;
    // (n-1) * S^2 is the sum of squared deviations.
    const double ss1 = kernels::sum_sq_dev(x1, mean1);
    const double ss2 = kernels::sum_sq_dev(x2, mean2);
    const double pooled = std::sqrt((ss1 + ss2) / (n1 + n2 - 2.0));
    if (!(pooled > 0.0)) return std::nullopt;
    const double t = (mean1 - mean2) / (pooled * std::sqrt(1.0 / n1 + 1.0 / n2));
    return TStatistic{t, pooled};
}

double p_value_two_tailed(double t, double df) {
    if (!(df >= 1.0)) throw std::invalid_argument("degrees of freedom must be >= 1");
    if (std::isnan(t)) throw std::invalid_argument("t is NaN");
    if (std::isinf(t)) return 0.0;
    const boost::math::students_t dist(df);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
    return std::clamp(p, 0.0, 1.0);
}

SelectionResult select_genes(const ExpressionDataset& train, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    const auto totals = class_counts(train);
    for (const auto& [name, count] : totals) {
        if (count < 2) throw DataError("class '" + name + "' has fewer than 2 samples");
    }

    SelectionResult out;
    out.alpha = alpha;
    out.gene_ids = train.gene_ids;
    out.norm = fit_normalization(train);

    const std::size_t genes = train.gene_count();
    auto& tt = out.ttest;
    tt.t.assign(genes, 0.0);
    tt.pooled_sd.assign(genes, 0.0);
    tt.p.assign(genes, 1.0);
    tt.status.assign(genes, GeneStatus::kZeroIqr);
    tt.df = train.sample_count() - 2;

    std::vector<double> group0;
    std::vector<double> group1;
    for (std::size_t g = 0; g < genes; ++g) {
        const double scale = out.norm.iqr[g];
        if (!(scale > 0.0)) continue;
        const double center = out.norm.median[g];
        group0.clear();
        group1.clear();
        const auto row = train.values.row(g);
        for (std::size_t s = 0; s < row.size(); ++s) {
            const double v = (row[s] - center) / scale;
            (train.labels[s] == 0 ? group0 : group1).push_back(v);
        }
        const auto stat = t_statistic(group0, group1);
        if (!stat) {
            tt.status[g] = GeneStatus::kDegenerate;
            continue;
        }
        tt.status[g] = GeneStatus::kTested;
        tt.t[g] = stat->t;
        tt.pooled_sd[g] = stat->pooled_sd;
        tt.p[g] = p_value_two_tailed(stat->t, static_cast<double>(tt.df));
        if (tt.p[g] < alpha || alpha >= 1.0) out.keep.push_back(g);
    }
    return out;
}

ExpressionDataset SelectionResult::transform(const ExpressionDataset& ds) const {
    if (ds.gene_count() != norm.size()) {
        throw DataError("dataset has " + std::to_string(ds.gene_count()) + " genes, selection was fit on " +
                        std::to_string(norm.size()));
    }
    for (std::size_t g = 0; g < ds.gene_count(); ++g) {
        if (ds.gene_ids[g] != gene_ids[g]) {
            throw DataError("gene '" + ds.gene_ids[g] + "' does not match training gene '" + gene_ids[g] + "'");
        }
    }
    return apply_normalization(project_genes(ds, keep), norm.project(keep));
}

}  // namespace oncoclass
