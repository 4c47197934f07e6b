#include <algorithm>
#include <cmath>

#include "oncoclass/classifiers_optim.hpp"
#include "oncoclass/kernels.hpp"

namespace oncoclass {

namespace {

constexpr double kStepEps = 1e-12;

class SmoSolver {
  public:
    SmoSolver(const TrainingSet& train, const SvmOptions& options, SvmModel& model)
        : x_(train.x), opt_(options), m_(model), n_(train.size()) {}

    void run() {
        std::size_t quiet_sweeps = 0;
        bool examine_all = true;
        while (m_.sweeps < opt_.max_sweeps) {
            std::size_t changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < n_; ++i) changed += examine(i);
            } else {
                for (std::size_t i = 0; i < n_; ++i) {
                    if (non_bound(i)) changed += examine(i);
                }
            }
            ++m_.sweeps;
            if (examine_all) {
                quiet_sweeps = changed == 0 ? quiet_sweeps + 1 : 0;
                if (quiet_sweeps >= opt_.max_passes) break;
                if (changed > 0) examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
        }
    }

  private:
    // Rounding can leave an alpha a few ulps inside a bound, where it would
    // be treated as a free support vector; pin it to the bound instead.
    double snap(double a) const {
        if (a < kStepEps * m_.c) return 0.0;
        if (a > m_.c * (1.0 - kStepEps)) return m_.c;
        return a;
    }

    bool non_bound(std::size_t i) const { return m_.alpha[i] > 0.0 && m_.alpha[i] < m_.c; }

    double error(std::size_t i) const { return kernels::dot(m_.weights, x_.row(i)) + m_.bias - m_.y[i]; }

    double kernel(std::size_t i, std::size_t j) const { return kernels::dot(x_.row(i), x_.row(j)); }

    std::size_t examine(std::size_t i2) {
        const double y2 = m_.y[i2];
        const double a2 = m_.alpha[i2];
        const double e2 = error(i2);
        const double r2 = e2 * y2;
        if (!((r2 < -opt_.tol && a2 < m_.c) || (r2 > opt_.tol && a2 > 0.0))) return 0;

        // Second-choice heuristic: the non-bound sample with the largest |E1 - E2|.
        std::size_t best = n_;
        double best_gap = -1.0;
        std::size_t non_bound_count = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!non_bound(i)) continue;
            ++non_bound_count;
            const double gap = std::fabs(error(i) - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (non_bound_count > 1 && best < n_ && take_step(best, i2, e2)) return 1;

        // Deterministic rotating start so that no sample is always tried first.
        const std::size_t start = (i2 * 7919 + m_.sweeps) % n_;
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t i1 = (start + k) % n_;
            if (non_bound(i1) && take_step(i1, i2, e2)) return 1;
        }
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t i1 = (start + k) % n_;
            if (take_step(i1, i2, e2)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2, double e2) {
        if (i1 == i2) return false;
        const double c = m_.c;
        const double a1 = m_.alpha[i1];
        const double a2 = m_.alpha[i2];
        const double y1 = m_.y[i1];
        const double y2 = m_.y[i2];
        const double e1 = error(i1);
        const double s = y1 * y2;

        double lo;
        double hi;
        if (y1 != y2) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(c, c + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - c);
            hi = std::min(c, a1 + a2);
        }
        if (lo >= hi) return false;

        const double k11 = kernel(i1, i1);
        const double k12 = kernel(i1, i2);
        const double k22 = kernel(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2_new;
        if (eta > 0.0) {
            a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // Objective at the segment ends (Platt's eta <= 0 branch).
            const double f1 = y1 * (e1 - m_.bias) - a1 * k11 - s * a2 * k12;
            const double f2 = y2 * (e2 - m_.bias) - s * a1 * k12 - a2 * k22;
            const double l1 = a1 + s * (a2 - lo);
            const double h1 = a1 + s * (a2 - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (obj_lo < obj_hi - kStepEps) {
                a2_new = lo;
            } else if (obj_lo > obj_hi + kStepEps) {
                a2_new = hi;
            } else {
                a2_new = a2;
            }
        }
        a2_new = snap(a2_new);
        if (std::fabs(a2_new - a2) < kStepEps * (a2_new + a2 + kStepEps)) return false;

        double a1_new = a1 + s * (a2 - a2_new);
        if (a1_new < 0.0) {
            a2_new += s * a1_new;
            a1_new = 0.0;
        } else if (a1_new > c) {
            a2_new += s * (a1_new - c);
            a1_new = c;
        }
        a1_new = snap(a1_new);
        a2_new = snap(a2_new);

        const double d1 = y1 * (a1_new - a1);
        const double d2 = y2 * (a2_new - a2);
        const double b1 = m_.bias - e1 - d1 * k11 - d2 * k12;
        const double b2 = m_.bias - e2 - d1 * k12 - d2 * k22;
        if (a1_new > 0.0 && a1_new < c) {
            m_.bias = b1;
        } else if (a2_new > 0.0 && a2_new < c) {
            m_.bias = b2;
        } else {
            m_.bias = 0.5 * (b1 + b2);
        }
        kernels::axpy(d1, x_.row(i1), m_.weights);
        kernels::axpy(d2, x_.row(i2), m_.weights);
        m_.alpha[i1] = a1_new;
        m_.alpha[i2] = a2_new;
        if (opt_.record_objective) m_.objective_trace.push_back(svm_dual_objective(m_));
        return true;
    }

    const Matrix& x_;
    const SvmOptions& opt_;
    SvmModel& m_;
    std::size_t n_;
};

}  // namespace

double svm_dual_objective(const SvmModel& model) {
    double sum_alpha = 0.0;
    for (double a : model.alpha) sum_alpha += a;
    return sum_alpha - 0.5 * kernels::dot(model.weights, model.weights);
}

double SvmModel::decision(std::span<const double> features) const { return kernels::dot(weights, features) + bias; }

Prediction SvmModel::predict(std::span<const double> features) const {
    const double f = decision(features);
    return Prediction::from_log_scores(-f, f);
}

SvmModel train_smo_svm(const TrainingSet& train, const SvmOptions& options) {
    if (!(options.c > 0.0)) throw TrainingError("SMO: C must be positive");
    if (train.size() == 0) throw TrainingError("SMO: empty training set");
    SvmModel m;
    m.c = options.c;
    m.y.resize(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        if (train.y[i] > 1) throw TrainingError("SMO: labels must be binary");
        m.y[i] = train.y[i] == 1 ? 1.0 : -1.0;
    }
    m.alpha.assign(train.size(), 0.0);
    m.weights.assign(train.feature_count(), 0.0);

    const auto totals = train.class_totals();
    if (totals[0] == 0 || totals[1] == 0) {
        // The equality constraint pins every multiplier at 0; the bias alone decides.
        m.bias = totals[1] > 0 ? 1.0 : -1.0;
    } else {
        SmoSolver(train, options, m).run();
    }

    std::size_t sv = 0;
    for (double a : m.alpha) sv += a > 0.0 ? 1 : 0;
    m.support_vectors = Matrix(sv, train.feature_count());
    for (std::size_t i = 0, r = 0; i < train.size(); ++i) {
        if (m.alpha[i] > 0.0) std::ranges::copy(train.x.row(i), m.support_vectors.row(r++).begin());
    }
    return m;
}

}  // namespace oncoclass
