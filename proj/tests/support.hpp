#pragma once

// Small builders shared by the test suites.

#include <random>
#include <string>
#include <vector>

#include "oncoclass/dataset.hpp"
#include "oncoclass/model.hpp"

namespace testutil {

using oncoclass::ExpressionDataset;
using oncoclass::Matrix;
using oncoclass::TrainingSet;

inline Matrix matrix_of(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

/// Samples as rows.
inline TrainingSet training_set(const std::vector<std::vector<double>>& rows, std::vector<std::size_t> y) {
    return TrainingSet{matrix_of(rows), std::move(y), {"Tumor", "Normal"}};
}

/// Genes as rows; labels index {"Tumor", "Normal"}.
inline ExpressionDataset dataset(const std::vector<std::vector<double>>& gene_rows, std::vector<std::size_t> labels) {
    ExpressionDataset ds;
    ds.values = matrix_of(gene_rows);
    for (std::size_t g = 0; g < gene_rows.size(); ++g) ds.gene_ids.push_back("g" + std::to_string(g));
    for (std::size_t s = 0; s < labels.size(); ++s) ds.sample_ids.push_back("s" + std::to_string(s));
    ds.label_names = {"Tumor", "Normal"};
    ds.labels = std::move(labels);
    return ds;
}

/// Two Gaussian blobs in d dimensions, centers at -gap/2 and +gap/2 along every axis.
inline TrainingSet blobs(std::size_t per_class, std::size_t d, double gap, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    TrainingSet t{Matrix(2 * per_class, d), {}, {"Tumor", "Normal"}};
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const std::size_t cls = i < per_class ? 0 : 1;
        for (std::size_t f = 0; f < d; ++f) t.x(i, f) = (cls == 0 ? -gap / 2 : gap / 2) + noise(rng);
        t.y.push_back(cls);
    }
    return t;
}

inline double accuracy_on(const oncoclass::Model& m, const TrainingSet& t) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < t.size(); ++i) ok += m.predict(t.x.row(i)).label == t.y[i];
    return static_cast<double>(ok) / static_cast<double>(t.size());
}

}  // namespace testutil
