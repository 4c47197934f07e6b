#include "oncoclass/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace oncoclass {

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    }
    return t;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(jobs, n);
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

Orientation parse_orientation(const std::string& name) {
    if (name == "genes-as-rows" || name == "genes") return Orientation::kGenesAsRows;
    if (name == "samples-as-rows" || name == "samples") return Orientation::kSamplesAsRows;
    if (name == "auto") return Orientation::kAuto;
    throw ConfigError("unknown dataset orientation '" + name + "'");
}

std::string to_string(Orientation o) {
    switch (o) {
        case Orientation::kGenesAsRows:
            return "genes-as-rows";
        case Orientation::kSamplesAsRows:
            return "samples-as-rows";
        case Orientation::kAuto:
            return "auto";
    }
    return "auto";
}

std::size_t ExpressionDataset::label_index(const std::string& name) const {
    for (std::size_t i = 0; i < label_names.size(); ++i) {
        if (label_names[i] == name) return i;
    }
    return label_names.size();
}

void ExpressionDataset::validate() const {
    if (values.rows() != gene_ids.size()) throw DataError("row count does not match gene id count");
    if (values.cols() != labels.size()) throw DataError("column count does not match label count");
    if (sample_ids.size() != labels.size()) throw DataError("sample id count does not match label count");
    if (label_names[0].empty() || label_names[1].empty() || label_names[0] == label_names[1]) {
        throw DataError("label cardinality: dataset must declare exactly two distinct labels");
    }
    for (auto l : labels) {
        if (l > 1) throw DataError("label index out of range");
    }
    std::unordered_set<std::string> seen;
    for (const auto& id : gene_ids) {
        if (!seen.insert(id).second) throw DataError("duplicate gene id '" + id + "'");
    }
    for (double v : values.data()) {
        if (!std::isfinite(v)) throw DataError("non-finite expression value");
    }
}

namespace {

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        std::string cell = line.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
        const auto b = cell.find_first_not_of(" \t");
        const auto e = cell.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc{} || ptr != last) {
        throw DataError("non-numeric cell '" + cell + "' on line " + std::to_string(line_no));
    }
    if (!std::isfinite(v)) throw DataError("non-finite cell on line " + std::to_string(line_no));
    return v;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

struct LabelAssigner {
    std::vector<std::string> names;

    std::size_t assign(const std::string& name, std::size_t line_no) {
        if (name.empty()) throw DataError("missing label for a sample on line " + std::to_string(line_no));
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) return i;
        }
        names.push_back(name);
        return names.size() - 1;
    }

    std::array<std::string, 2> finish() const {
        if (names.size() != 2) {
            throw DataError("label cardinality: expected exactly 2 distinct labels, found " +
                            std::to_string(names.size()));
        }
        return {names[0], names[1]};
    }
};

std::vector<std::vector<std::string>> read_rows(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

ExpressionDataset parse_samples_as_rows(const std::vector<std::vector<std::string>>& rows) {
    const auto& header = rows.front();
    if (header.size() < 2 || header.back() != "class") {
        throw DataError("samples-as-rows header must end with a 'class' column");
    }
    ExpressionDataset ds;
    ds.gene_ids.assign(header.begin() + 1, header.end() - 1);
    const std::size_t genes = ds.gene_ids.size();
    const std::size_t samples = rows.size() - 1;
    ds.values = Matrix(genes, samples);
    LabelAssigner labels;
    for (std::size_t s = 0; s < samples; ++s) {
        const auto& row = rows[s + 1];
        const std::size_t line_no = s + 2;
        if (row.size() == genes + 1) {
            throw DataError("missing label for a sample on line " + std::to_string(line_no));
        }
        if (row.size() != genes + 2) {
            throw DataError("row width mismatch on line " + std::to_string(line_no));
        }
        ds.sample_ids.push_back(row.front());
        for (std::size_t g = 0; g < genes; ++g) ds.values(g, s) = parse_cell(row[g + 1], line_no);
        ds.labels.push_back(labels.assign(row.back(), line_no));
    }
    ds.label_names = labels.finish();
    return ds;
}

ExpressionDataset parse_genes_as_rows(const std::vector<std::vector<std::string>>& rows) {
    const auto& header = rows.front();
    if (header.empty() || header.front() != "id") throw DataError("genes-as-rows header must start with 'id'");
    if (rows.size() < 2 || rows.back().front() != "class") {
        throw DataError("genes-as-rows file must end with a 'class' row");
    }
    ExpressionDataset ds;
    ds.sample_ids.assign(header.begin() + 1, header.end());
    const std::size_t samples = ds.sample_ids.size();
    const std::size_t genes = rows.size() - 2;
    ds.values = Matrix(genes, samples);
    for (std::size_t g = 0; g < genes; ++g) {
        const auto& row = rows[g + 1];
        const std::size_t line_no = g + 2;
        if (row.size() != samples + 1) throw DataError("row width mismatch on line " + std::to_string(line_no));
        ds.gene_ids.push_back(row.front());
        for (std::size_t s = 0; s < samples; ++s) ds.values(g, s) = parse_cell(row[s + 1], line_no);
    }
    const auto& class_row = rows.back();
    const std::size_t class_line = rows.size();
    if (class_row.size() < samples + 1) {
        throw DataError("missing label for a sample on line " + std::to_string(class_line));
    }
    if (class_row.size() != samples + 1) {
        throw DataError("row width mismatch on line " + std::to_string(class_line));
    }
    LabelAssigner labels;
    for (std::size_t s = 0; s < samples; ++s) ds.labels.push_back(labels.assign(class_row[s + 1], class_line));
    ds.label_names = labels.finish();
    return ds;
}

}  // namespace

ExpressionDataset read_dataset(std::istream& in, Orientation format) {
    const auto rows = read_rows(in);
    if (rows.empty()) throw DataError("empty dataset file");
    if (format == Orientation::kAuto) {
        format = rows.front().back() == "class" ? Orientation::kSamplesAsRows : Orientation::kGenesAsRows;
    }
    ExpressionDataset ds = format == Orientation::kSamplesAsRows ? parse_samples_as_rows(rows)
                                                                 : parse_genes_as_rows(rows);
    ds.validate();
    return ds;
}

ExpressionDataset load_dataset(const std::filesystem::path& path, Orientation format) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file " + path.string());
    try {
        return read_dataset(in, format);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_dataset(const ExpressionDataset& ds, std::ostream& out, Orientation format) {
    if (format == Orientation::kSamplesAsRows) {
        out << "id";
        for (const auto& g : ds.gene_ids) out << ',' << g;
        out << ",class\n";
        for (std::size_t s = 0; s < ds.sample_count(); ++s) {
            out << ds.sample_ids[s];
            for (std::size_t g = 0; g < ds.gene_count(); ++g) out << ',' << format_double(ds.values(g, s));
            out << ',' << ds.label_names[ds.labels[s]] << '\n';
        }
        return;
    }
    out << "id";
    for (const auto& s : ds.sample_ids) out << ',' << s;
    out << '\n';
    for (std::size_t g = 0; g < ds.gene_count(); ++g) {
        out << ds.gene_ids[g];
        for (double v : ds.values.row(g)) out << ',' << format_double(v);
        out << '\n';
    }
    out << "class";
    for (auto l : ds.labels) out << ',' << ds.label_names[l];
    out << '\n';
}

void save_dataset(const ExpressionDataset& ds, const std::filesystem::path& path, Orientation format) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write dataset file " + path.string());
    write_dataset(ds, out, format == Orientation::kAuto ? Orientation::kGenesAsRows : format);
    if (!out) throw DataError("write failed for " + path.string());
}

std::map<std::string, std::size_t> class_counts(const ExpressionDataset& ds) {
    std::map<std::string, std::size_t> counts{{ds.label_names[0], 0}, {ds.label_names[1], 0}};
    for (auto l : ds.labels) ++counts[ds.label_names[l]];
    return counts;
}

ExpressionDataset project_genes(const ExpressionDataset& ds, const std::vector<std::size_t>& keep) {
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= ds.gene_count()) throw std::out_of_range("gene index out of range");
        if (i > 0 && keep[i] <= keep[i - 1]) {
            throw std::invalid_argument(keep[i] == keep[i - 1] ? "duplicate gene index"
                                                              : "gene indices must be strictly increasing");
        }
    }
    ExpressionDataset out;
    out.sample_ids = ds.sample_ids;
    out.label_names = ds.label_names;
    out.labels = ds.labels;
    out.values = Matrix(keep.size(), ds.sample_count());
    out.gene_ids.reserve(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        out.gene_ids.push_back(ds.gene_ids[keep[i]]);
        std::ranges::copy(ds.values.row(keep[i]), out.values.row(i).begin());
    }
    return out;
}

ExpressionDataset scale_values(const ExpressionDataset& ds, double factor) {
    ExpressionDataset out = ds;
    for (double& v : out.values.data()) v *= factor;
    return out;
}

std::array<std::size_t, 2> TrainingSet::class_totals() const {
    std::array<std::size_t, 2> totals{0, 0};
    for (auto l : y) ++totals[l];
    return totals;
}

TrainingSet to_training_set(const ExpressionDataset& ds) {
    return TrainingSet{ds.values.transposed(), ds.labels, ds.label_names};
}

}  // namespace oncoclass
