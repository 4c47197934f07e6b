#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "oncoclass/common.hpp"

namespace oncoclass {

/// On-disk CSV layouts. Canonical in-memory orientation is always genes as rows.
enum class Orientation { kGenesAsRows, kSamplesAsRows, kAuto };

Orientation parse_orientation(const std::string& name);
std::string to_string(Orientation o);

/// Gene-by-sample expression matrix with exactly two class labels.
///
/// Labels are stored as indices into `label_names`; label order is the order
/// of first appearance in the source file and is the tie-break order used
/// throughout the library.
struct ExpressionDataset {
    std::vector<std::string> gene_ids;
    std::vector<std::string> sample_ids;
    Matrix values;  // genes x samples
    std::array<std::string, 2> label_names;
    std::vector<std::size_t> labels;  // one per sample, each 0 or 1

    std::size_t gene_count() const { return values.rows(); }
    std::size_t sample_count() const { return values.cols(); }

    /// Index of a label name, or 2 if the dataset does not carry it.
    std::size_t label_index(const std::string& name) const;

    /// Throws DataError if any structural invariant is broken.
    void validate() const;

    bool operator==(const ExpressionDataset&) const = default;
};

ExpressionDataset load_dataset(const std::filesystem::path& path,
                               Orientation format = Orientation::kAuto);
ExpressionDataset read_dataset(std::istream& in, Orientation format = Orientation::kAuto);

void save_dataset(const ExpressionDataset& ds, const std::filesystem::path& path,
                  Orientation format = Orientation::kGenesAsRows);
void write_dataset(const ExpressionDataset& ds, std::ostream& out,
                   Orientation format = Orientation::kGenesAsRows);

std::map<std::string, std::size_t> class_counts(const ExpressionDataset& ds);

/// Keeps the given gene rows. Indices must be strictly increasing and in range.
ExpressionDataset project_genes(const ExpressionDataset& ds, const std::vector<std::size_t>& keep);

/// Multiplies every expression value by `factor`.
ExpressionDataset scale_values(const ExpressionDataset& ds, double factor);

/// Sample-major view used by the classifiers: rows are samples, columns
/// are features (genes), `y` holds class indices.
struct TrainingSet {
    Matrix x;
    std::vector<std::size_t> y;
    std::array<std::string, 2> label_names;

    std::size_t size() const { return x.rows(); }
    std::size_t feature_count() const { return x.cols(); }
    std::array<std::size_t, 2> class_totals() const;
};

TrainingSet to_training_set(const ExpressionDataset& ds);

}  // namespace oncoclass
