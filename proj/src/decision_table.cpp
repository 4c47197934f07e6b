#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>

#include "oncoclass/classifiers_tree.hpp"

namespace oncoclass {

namespace {

// Bins are < 64 in practice; 6 bits per feature keeps keys of up to 10
// features inside 64 bits. Larger subsets fall back to hashing.
std::uint64_t encode(std::span<const std::size_t> row, std::span<const std::size_t> features) {
    std::uint64_t key = 0xcbf29ce484222325ULL;
    if (features.size() <= 10) {
        key = 0;
        for (auto f : features) key = (key << 6) | static_cast<std::uint64_t>(row[f] & 63U);
        return key;
    }
    for (auto f : features) {
        key ^= static_cast<std::uint64_t>(row[f]) + 1;
        key *= 0x100000001b3ULL;
    }
    return key;
}

std::size_t argmax2(const std::array<double, 2>& c) { return c[1] > c[0] ? 1 : 0; }

}  // namespace

double decision_table_loo(const std::vector<std::vector<std::size_t>>& bins, std::span<const std::size_t> labels,
                          std::span<const std::size_t> features) {
    const std::size_t n = labels.size();
    if (n == 0) return 0.0;
    std::array<double, 2> totals{0.0, 0.0};
    for (auto l : labels) totals[l] += 1.0;

    std::unordered_map<std::uint64_t, std::array<double, 2>> table;
    std::vector<std::uint64_t> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
        keys[i] = encode(bins[i], features);
        table[keys[i]][labels[i]] += 1.0;
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto cell = table[keys[i]];
        cell[labels[i]] -= 1.0;
        std::size_t predicted;
        if (cell[0] + cell[1] > 0.0) {
            predicted = argmax2(cell);
        } else {
            auto rest = totals;
            rest[labels[i]] -= 1.0;
            predicted = argmax2(rest);
        }
        if (predicted == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

std::uint64_t DecisionTableModel::key(std::span<const double> features) const {
    std::vector<std::size_t> row(features.size(), 0);
    for (auto f : selected) row[f] = discretizer.bin(f, features[f]);
    return encode(row, selected);
}

Prediction DecisionTableModel::predict(std::span<const double> features) const {
    const auto k = key(features);
    const auto it = std::lower_bound(table.begin(), table.end(), k,
                                     [](const auto& entry, std::uint64_t value) { return entry.first < value; });
    if (it != table.end() && it->first == k) return Prediction::from_scores(it->second[0], it->second[1]);
    Prediction p = Prediction::from_scores(class_counts[0], class_counts[1]);
    p.label = default_class;
    return p;
}

DecisionTableModel train_decision_table(const TrainingSet& train, const DecisionTableOptions& options) {
    if (train.size() == 0) throw TrainingError("decision table: empty training set");
    if (options.bins < 2) throw TrainingError("decision table: need at least 2 bins");

    DecisionTableModel m;
    m.discretizer = fit_discretizer(train, options.bins);
    std::vector<std::vector<std::size_t>> bins(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) bins[i] = m.discretizer.bin_row(train.x.row(i));

    using Subset = std::vector<std::size_t>;
    struct Open {
        double score;
        Subset subset;
        bool operator<(const Open& other) const {
            // priority_queue pops the largest: higher score, then smaller subset, then lexicographically first
            if (score != other.score) return score < other.score;
            if (subset.size() != other.subset.size()) return subset.size() > other.subset.size();
            return subset > other.subset;
        }
    };

    const double baseline = decision_table_loo(bins, train.y, {});
    m.baseline_accuracy = baseline;
    Subset best_subset;
    double best_score = baseline;

    std::priority_queue<Open> open;
    std::set<Subset> visited{Subset{}};
    open.push({baseline, {}});
    std::size_t stale = 0;
    while (!open.empty() && stale < options.max_stale) {
        const Open node = open.top();
        open.pop();
        bool improved = false;
        if (node.subset.size() < options.max_subset) {
            for (std::size_t f = 0; f < train.feature_count(); ++f) {
                if (std::ranges::binary_search(node.subset, f)) continue;
                Subset child = node.subset;
                child.insert(std::upper_bound(child.begin(), child.end(), f), f);
                if (!visited.insert(child).second) continue;
                const double score = decision_table_loo(bins, train.y, child);
                if (score > best_score + 1e-12) {
                    best_score = score;
                    best_subset = child;
                    improved = true;
                }
                open.push({score, std::move(child)});
            }
        }
        stale = improved ? 0 : stale + 1;
    }

    m.selected = best_subset;
    m.loo_accuracy = best_score;
    for (auto l : train.y) m.class_counts[l] += 1.0;
    m.default_class = argmax2(m.class_counts);
    std::map<std::uint64_t, std::array<double, 2>> cells;
    for (std::size_t i = 0; i < train.size(); ++i) cells[encode(bins[i], m.selected)][train.y[i]] += 1.0;
    m.table.assign(cells.begin(), cells.end());
    return m;
}

}  // namespace oncoclass
