#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "oncoclass/classifiers_tree.hpp"

namespace oncoclass {

double entropy(std::span<const double> counts) {
    double total = 0.0;
    for (double c : counts) {
        if (c < 0.0) throw std::invalid_argument("entropy of negative counts");
        total += c;
    }
    if (!(total > 0.0)) throw std::invalid_argument("entropy of all-zero counts");
    double h = 0.0;
    for (double c : counts) {
        if (c > 0.0) {
            const double p = c / total;
            h -= p * std::log2(p);
        }
    }
    return h;
}

double pessimistic_extra_errors(double n, double errors, double cf) {
    if (!(cf > 0.0 && cf < 1.0)) throw std::invalid_argument("confidence factor must lie in (0, 1)");
    if (errors < 1.0) {
        const double base = n * (1.0 - std::pow(cf, 1.0 / n));
        if (errors == 0.0) return base;
        return base + errors * (pessimistic_extra_errors(n, 1.0, cf) - base);
    }
    if (errors + 0.5 >= n) return std::max(n - errors, 0.0);
    const double z = boost::math::quantile(boost::math::normal(), 1.0 - cf);
    const double f = (errors + 0.5) / n;
    const double r =
        (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) / (1.0 + z * z / n);
    return r * n - errors;
}

std::size_t DecisionTree::leaf_of(std::span<const double> features) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        i = features[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    }
    return i;
}

Prediction DecisionTree::predict(std::span<const double> features) const {
    const auto& leaf = nodes[leaf_of(features)];
    return Prediction::from_scores(leaf.counts[0], leaf.counts[1]);
}

std::size_t DecisionTree::leaf_count() const {
    return static_cast<std::size_t>(std::ranges::count_if(nodes, [](const Node& n) { return n.is_leaf(); }));
}

std::size_t DecisionTree::depth() const {
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    std::size_t deepest = 0;
    while (!stack.empty()) {
        const auto [i, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (!nodes[i].is_leaf()) {
            stack.emplace_back(nodes[i].left, d + 1);
            stack.emplace_back(nodes[i].right, d + 1);
        }
    }
    return deepest;
}

namespace {

double leaf_errors(const DecisionTree::Node& n) { return n.total() - std::max(n.counts[0], n.counts[1]); }

double leaf_estimate(const DecisionTree::Node& n, double cf) {
    const double e = leaf_errors(n);
    return e + pessimistic_extra_errors(n.total(), e, cf);
}

double subtree_estimate(const DecisionTree& t, std::size_t i, double cf) {
    const auto& n = t.nodes[i];
    if (n.is_leaf()) return leaf_estimate(n, cf);
    return subtree_estimate(t, n.left, cf) + subtree_estimate(t, n.right, cf);
}

struct SplitChoice {
    std::size_t feature = DecisionTree::kLeaf;
    double threshold = 0.0;
    double gain = 0.0;
    double gain_ratio = 0.0;
};

class Grower {
  public:
    Grower(const TrainingSet& train, const TreeGrowOptions& options, std::mt19937_64* rng)
        : train_(train), options_(options), rng_(rng) {
        min_split_ = options.min_split > 0 ? options.min_split : 2 * options.min_leaf;
        all_features_.resize(train.feature_count());
        std::iota(all_features_.begin(), all_features_.end(), 0);
    }

    std::size_t grow(std::vector<std::size_t> samples, std::size_t depth, DecisionTree& tree) {
        const std::size_t id = tree.nodes.size();
        tree.nodes.emplace_back();
        std::array<double, 2> counts{0.0, 0.0};
        for (auto s : samples) counts[train_.y[s]] += 1.0;
        tree.nodes[id].counts = counts;

        const bool pure = counts[0] == 0.0 || counts[1] == 0.0;
        const bool depth_cap = options_.max_depth > 0 && depth >= options_.max_depth;
        if (pure || samples.size() < min_split_ || depth_cap) return id;

        const auto split = best_split(samples, counts);
        if (split.feature == DecisionTree::kLeaf) return id;

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (auto s : samples) {
            (train_.x(s, split.feature) <= split.threshold ? left : right).push_back(s);
        }
        samples.clear();
        samples.shrink_to_fit();
        const std::size_t l = grow(std::move(left), depth + 1, tree);
        const std::size_t r = grow(std::move(right), depth + 1, tree);
        auto& node = tree.nodes[id];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

  private:
    std::vector<std::size_t> candidate_features() {
        const std::size_t d = train_.feature_count();
        const std::size_t m = options_.features_per_split;
        if (m == 0 || m >= d) return all_features_;
        if (rng_ == nullptr) throw std::logic_error("feature subsampling needs an RNG");
        std::vector<std::size_t> pool = all_features_;
        for (std::size_t i = 0; i < m; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, d - 1);
            std::swap(pool[i], pool[pick(*rng_)]);
        }
        pool.resize(m);
        std::ranges::sort(pool);
        return pool;
    }

    SplitChoice best_split(const std::vector<std::size_t>& samples, const std::array<double, 2>& counts) {
        const double n = static_cast<double>(samples.size());
        const double parent_entropy = entropy(counts);
        const auto min_leaf = static_cast<double>(std::max<std::size_t>(options_.min_leaf, 1));

        SplitChoice best;
        std::vector<std::pair<double, std::size_t>> column(samples.size());
        for (const auto f : candidate_features()) {
            for (std::size_t i = 0; i < samples.size(); ++i) {
                column[i] = {train_.x(samples[i], f), train_.y[samples[i]]};
            }
            std::ranges::sort(column);

            // Threshold by information gain, then features compared by gain ratio.
            std::array<double, 2> left{0.0, 0.0};
            double best_gain = 0.0;
            std::size_t best_pos = 0;
            for (std::size_t i = 0; i + 1 < column.size(); ++i) {
                left[column[i].second] += 1.0;
                if (column[i].first == column[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = n - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                const std::array<double, 2> right{counts[0] - left[0], counts[1] - left[1]};
                const double gain = parent_entropy - (nl / n) * entropy(left) - (nr / n) * entropy(right);
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best_pos = i + 1;
                }
            }
            if (best_pos == 0) continue;
            const double nl = static_cast<double>(best_pos);
            const std::array<double, 2> sizes{nl, n - nl};
            const double split_info = entropy(sizes);
            if (!(split_info > 0.0)) continue;
            const double ratio = best_gain / split_info;
            if (ratio > best.gain_ratio + 1e-12) {
                const double lo = column[best_pos - 1].first;
                const double hi = column[best_pos].first;
                double mid = lo + (hi - lo) / 2.0;
                if (!(mid >= lo && mid < hi)) mid = lo;
                best = SplitChoice{f, mid, best_gain, ratio};
            }
        }
        return best;
    }

    const TrainingSet& train_;
    TreeGrowOptions options_;
    std::mt19937_64* rng_;
    std::size_t min_split_ = 2;
    std::vector<std::size_t> all_features_;
};

void compact(DecisionTree& tree) {
    std::vector<DecisionTree::Node> out;
    out.reserve(tree.nodes.size());
    const auto copy = [&](auto&& self, std::size_t i) -> std::size_t {
        const std::size_t id = out.size();
        out.push_back(tree.nodes[i]);
        if (!tree.nodes[i].is_leaf()) {
            const std::size_t l = self(self, tree.nodes[i].left);
            const std::size_t r = self(self, tree.nodes[i].right);
            out[id].left = l;
            out[id].right = r;
        }
        return id;
    };
    copy(copy, 0);
    tree.nodes = std::move(out);
}

}  // namespace

double DecisionTree::pessimistic_error(double cf) const { return subtree_estimate(*this, 0, cf); }

DecisionTree grow_tree(const TrainingSet& train, std::span<const std::size_t> samples,
                       const TreeGrowOptions& options, std::mt19937_64* rng) {
    if (samples.empty()) throw TrainingError("tree growth needs at least one sample");
    DecisionTree tree;
    Grower grower(train, options, rng);
    grower.grow(std::vector<std::size_t>(samples.begin(), samples.end()), 0, tree);
    return tree;
}

void prune_pessimistic(DecisionTree& tree, double cf) {
    const auto visit = [&](auto&& self, std::size_t i) -> double {
        auto& node = tree.nodes[i];
        if (node.is_leaf()) return leaf_estimate(node, cf);
        const double sub = self(self, node.left) + self(self, node.right);
        const double as_leaf = leaf_estimate(node, cf);
        if (as_leaf <= sub) {
            node.feature = DecisionTree::kLeaf;
            return as_leaf;
        }
        return sub;
    };
    visit(visit, 0);
    compact(tree);
}

DecisionTree train_c45(const TrainingSet& train, const C45Options& options) {
    if (train.size() == 0) throw TrainingError("C4.5: empty training set");
    std::vector<std::size_t> samples(train.size());
    std::iota(samples.begin(), samples.end(), 0);
    TreeGrowOptions grow;
    grow.min_leaf = options.min_leaf;
    DecisionTree tree = grow_tree(train, samples, grow);
    if (options.prune) prune_pessimistic(tree, options.cf);
    return tree;
}

}  // namespace oncoclass
