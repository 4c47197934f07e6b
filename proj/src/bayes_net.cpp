#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "oncoclass/classifiers_prob.hpp"

namespace oncoclass {

namespace {

constexpr double kMinImprovement = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Counting and BIC scoring over feature-major discrete data.
class LocalScorer {
  public:
    LocalScorer(const std::vector<std::vector<std::size_t>>& columns, const std::vector<std::size_t>& arity,
                std::span<const std::size_t> labels)
        : columns_(columns), arity_(arity), labels_(labels), rows_(labels.size()) {}

    std::size_t config_count(const std::vector<std::size_t>& parents) const {
        std::size_t q = 2;
        for (auto p : parents) q *= arity_[p];
        return q;
    }

    /// Fills counts (q x r, row-major) for node `f` with the given feature parents.
    void count(std::size_t f, const std::vector<std::size_t>& parents, std::vector<double>& counts) const {
        const std::size_t r = arity_[f];
        counts.assign(config_count(parents) * r, 0.0);
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            std::size_t idx = 0;
            for (auto p : parents) idx = idx * arity_[p] + columns_[p][i];
            const std::size_t row = labels_[i] + 2 * idx;
            counts[row * r + columns_[f][i]] += 1.0;
        }
    }

    /// BIC of node f: sum_jk N_jk log(N_jk / N_j) - 0.5 log(N) (r - 1) q.
    double score(std::size_t f, const std::vector<std::size_t>& parents) const {
        thread_local std::vector<double> counts;
        count(f, parents, counts);
        const std::size_t r = arity_[f];
        const std::size_t q = counts.size() / r;
        double ll = 0.0;
        for (std::size_t j = 0; j < q; ++j) {
            double nj = 0.0;
            for (std::size_t k = 0; k < r; ++k) nj += counts[j * r + k];
            if (nj == 0.0) continue;
            for (std::size_t k = 0; k < r; ++k) {
                const double njk = counts[j * r + k];
                if (njk > 0.0) ll += njk * std::log(njk / nj);
            }
        }
        return ll - penalty(r, q);
    }

    double penalty(std::size_t r, std::size_t q) const {
        return 0.5 * std::log(static_cast<double>(rows_)) * static_cast<double>((r - 1) * q);
    }

    /// Adding p as a parent of f can raise the log-likelihood by at most
    /// N * min(log r_f, log r_p); if the extra penalty already exceeds that
    /// the move can never improve the score.
    bool add_can_improve(std::size_t f, std::size_t p, const std::vector<std::size_t>& parents) const {
        const double n = static_cast<double>(rows_);
        const double gain_bound = n * std::log(static_cast<double>(std::min(arity_[f], arity_[p])));
        const std::size_t q = config_count(parents);
        const double extra = penalty(arity_[f], q * arity_[p]) - penalty(arity_[f], q);
        return gain_bound > extra;
    }

  private:
    const std::vector<std::vector<std::size_t>>& columns_;
    const std::vector<std::size_t>& arity_;
    std::span<const std::size_t> labels_;
    std::size_t rows_;
};

bool has_parent(const std::vector<std::size_t>& parents, std::size_t p) {
    return std::find(parents.begin(), parents.end(), p) != parents.end();
}

std::vector<std::size_t> with_parent(std::vector<std::size_t> parents, std::size_t p) {
    parents.insert(std::upper_bound(parents.begin(), parents.end(), p), p);
    return parents;
}

std::vector<std::size_t> without_parent(std::vector<std::size_t> parents, std::size_t p) {
    parents.erase(std::find(parents.begin(), parents.end(), p));
    return parents;
}

/// True if `target` is an ancestor of `from` (reachable by walking parent links).
bool is_ancestor(const std::vector<std::vector<std::size_t>>& parents, std::size_t target, std::size_t from,
                 std::vector<char>& seen) {
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<std::size_t> stack{from};
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        if (v == target) return true;
        if (seen[v]) continue;
        seen[v] = 1;
        for (auto p : parents[v]) stack.push_back(p);
    }
    return false;
}

struct Move {
    enum Kind { kAdd, kRemove, kReverse } kind = kAdd;
    std::size_t parent = 0;
    std::size_t child = 0;
    double delta = kNegInf;
};

}  // namespace

BayesNetModel train_bayes_net_discrete(const std::vector<std::vector<std::size_t>>& bins,
                                       const std::vector<std::size_t>& arity,
                                       std::span<const std::size_t> labels, const BayesNetOptions& options) {
    if (options.max_parents < 0) throw TrainingError("Bayes net: max_parents must be >= 0");
    if (!(options.ess > 0.0)) throw TrainingError("Bayes net: ess must be positive");
    if (bins.size() != labels.size()) throw TrainingError("Bayes net: sample/label count mismatch");
    std::array<std::size_t, 2> totals{0, 0};
    for (auto l : labels) ++totals.at(l);
    if (totals[0] == 0 || totals[1] == 0) throw TrainingError("Bayes net: a class has no training samples");

    const std::size_t n_features = arity.size();
    const std::size_t n = labels.size();
    const auto max_parents = static_cast<std::size_t>(options.max_parents);

    std::vector<std::vector<std::size_t>> columns(n_features, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < n_features; ++f) columns[f][i] = bins[i][f];
    }
    const LocalScorer scorer(columns, arity, labels);

    std::vector<std::vector<std::size_t>> parents(n_features);
    std::vector<double> local(n_features);
    for (std::size_t f = 0; f < n_features; ++f) local[f] = scorer.score(f, parents[f]);

    double class_score = 0.0;
    for (auto t : totals) class_score += static_cast<double>(t) * std::log(static_cast<double>(t) / n);
    class_score -= scorer.penalty(2, 1);

    BayesNetModel model;
    const auto total_score = [&] { return class_score + std::accumulate(local.begin(), local.end(), 0.0); };
    model.score_trace.push_back(total_score());

    // Candidate additions per child, best first; rebuilt when the child's parent set changes.
    std::vector<std::vector<std::pair<double, std::size_t>>> add_candidates(n_features);
    const auto rebuild_adds = [&](std::size_t c) {
        auto& list = add_candidates[c];
        list.clear();
        if (parents[c].size() >= max_parents) return;
        for (std::size_t p = 0; p < n_features; ++p) {
            if (p == c || has_parent(parents[c], p) || !scorer.add_can_improve(c, p, parents[c])) continue;
            const double delta = scorer.score(c, with_parent(parents[c], p)) - local[c];
            if (delta > kMinImprovement) list.emplace_back(delta, p);
        }
        std::ranges::sort(list, [](const auto& a, const auto& b) {
            return a.first > b.first || (a.first == b.first && a.second < b.second);
        });
    };
    if (max_parents > 0) {
        for (std::size_t c = 0; c < n_features; ++c) rebuild_adds(c);
    }

    std::vector<char> seen(n_features);
    for (std::size_t step = 0; step < options.max_steps && max_parents > 0; ++step) {
        Move best;
        for (std::size_t c = 0; c < n_features; ++c) {
            if (parents[c].size() >= max_parents) continue;
            for (const auto& [delta, p] : add_candidates[c]) {
                if (delta <= best.delta) break;
                if (has_parent(parents[c], p)) continue;
                if (is_ancestor(parents, c, p, seen)) continue;
                best = Move{Move::kAdd, p, c, delta};
                break;
            }
        }
        for (std::size_t c = 0; c < n_features; ++c) {
            for (auto p : parents[c]) {
                const auto reduced = without_parent(parents[c], p);
                const double remove_delta = scorer.score(c, reduced) - local[c];
                if (remove_delta > best.delta) best = Move{Move::kRemove, p, c, remove_delta};
                if (parents[p].size() >= max_parents) continue;
                // Reversal is legal unless another path p -> ... -> c remains.
                auto trial = parents;
                trial[c] = reduced;
                if (is_ancestor(trial, p, c, seen)) continue;
                const double reverse_delta = remove_delta + scorer.score(p, with_parent(parents[p], c)) - local[p];
                if (reverse_delta > best.delta) best = Move{Move::kReverse, p, c, reverse_delta};
            }
        }
        if (!(best.delta > kMinImprovement)) break;

        switch (best.kind) {
            case Move::kAdd:
                parents[best.child] = with_parent(parents[best.child], best.parent);
                break;
            case Move::kRemove:
                parents[best.child] = without_parent(parents[best.child], best.parent);
                break;
            case Move::kReverse:
                parents[best.child] = without_parent(parents[best.child], best.parent);
                parents[best.parent] = with_parent(parents[best.parent], best.child);
                break;
        }
        local[best.child] = scorer.score(best.child, parents[best.child]);
        rebuild_adds(best.child);
        if (best.kind == Move::kReverse) {
            local[best.parent] = scorer.score(best.parent, parents[best.parent]);
            rebuild_adds(best.parent);
        }
        model.score_trace.push_back(total_score());
    }

    const double ess = options.ess;
    for (std::size_t c = 0; c < 2; ++c) {
        model.class_prior[c] = (static_cast<double>(totals[c]) + ess) / (static_cast<double>(n) + 2.0 * ess);
    }
    model.nodes.resize(n_features);
    std::vector<double> counts;
    for (std::size_t f = 0; f < n_features; ++f) {
        auto& node = model.nodes[f];
        node.parents = parents[f];
        node.arity = arity[f];
        scorer.count(f, node.parents, counts);
        const std::size_t r = node.arity;
        node.cpt.resize(counts.size());
        for (std::size_t j = 0; j < counts.size() / r; ++j) {
            double nj = 0.0;
            for (std::size_t k = 0; k < r; ++k) nj += counts[j * r + k];
            for (std::size_t k = 0; k < r; ++k) {
                node.cpt[j * r + k] = (counts[j * r + k] + ess) / (nj + static_cast<double>(r) * ess);
            }
        }
    }
    return model;
}

BayesNetModel train_bayes_net(const TrainingSet& train, const BayesNetOptions& options) {
    if (options.bins < 2) throw TrainingError("Bayes net: need at least 2 bins");
    const auto totals = train.class_totals();
    if (totals[0] == 0 || totals[1] == 0) throw TrainingError("Bayes net: a class has no training samples");
    Discretizer disc = fit_discretizer(train, options.bins);
    std::vector<std::vector<std::size_t>> bins(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) bins[i] = disc.bin_row(train.x.row(i));
    std::vector<std::size_t> arity(train.feature_count());
    for (std::size_t f = 0; f < arity.size(); ++f) arity[f] = disc.bins(f);
    BayesNetModel model = train_bayes_net_discrete(bins, arity, train.y, options);
    model.discretizer = std::move(disc);
    return model;
}

std::size_t BayesNetModel::cpt_row(std::size_t feature, std::size_t cls, std::span<const std::size_t> bins) const {
    std::size_t idx = 0;
    for (auto p : nodes[feature].parents) idx = idx * nodes[p].arity + bins[p];
    return cls + 2 * idx;
}

double BayesNetModel::log_joint(std::size_t cls, std::span<const std::size_t> bins) const {
    double lp = std::log(class_prior[cls]);
    for (std::size_t f = 0; f < nodes.size(); ++f) {
        const auto& node = nodes[f];
        lp += std::log(node.cpt[cpt_row(f, cls, bins) * node.arity + bins[f]]);
    }
    return lp;
}

std::array<double, 2> BayesNetModel::class_log_scores(std::span<const std::size_t> bins) const {
    return {log_joint(0, bins), log_joint(1, bins)};
}

Prediction BayesNetModel::predict(std::span<const double> features) const {
    const auto bins = discretizer.bin_row(features);
    const auto s = class_log_scores(bins);
    return Prediction::from_log_scores(s[0], s[1]);
}

std::size_t BayesNetModel::edge_count() const {
    std::size_t e = 0;
    for (const auto& n : nodes) e += n.parents.size();
    return e;
}

bool BayesNetModel::is_acyclic() const {
    // Kahn's algorithm over feature-to-feature edges.
    std::vector<std::size_t> indegree(nodes.size());
    std::vector<std::vector<std::size_t>> children(nodes.size());
    for (std::size_t f = 0; f < nodes.size(); ++f) {
        indegree[f] = nodes[f].parents.size();
        for (auto p : nodes[f].parents) children[p].push_back(f);
    }
    std::vector<std::size_t> ready;
    for (std::size_t f = 0; f < nodes.size(); ++f) {
        if (indegree[f] == 0) ready.push_back(f);
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        const auto v = ready.back();
        ready.pop_back();
        ++visited;
        for (auto ch : children[v]) {
            if (--indegree[ch] == 0) ready.push_back(ch);
        }
    }
    return visited == nodes.size();
}

}  // namespace oncoclass
