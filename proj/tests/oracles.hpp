#pragma once

// Independent reference computations. Deliberately naive: long double,
// explicit loops, no library statistics, no shared code with src/.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

/// Linear-interpolation quantile on a sorted copy, h = (n - 1) q.
inline long double quantile(std::vector<double> xs, double q) {
    std::sort(xs.begin(), xs.end());
    const long double h = static_cast<long double>(xs.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= xs.size()) return xs.back();
    return xs[lo] + (h - lo) * (static_cast<long double>(xs[lo + 1]) - xs[lo]);
}

inline long double iqr(const std::vector<double>& xs) { return quantile(xs, 0.75) - quantile(xs, 0.25); }

struct TResult {
    long double t;
    long double s;
};

/// Pooled two-sample t: S^2 = ((n1-1) v1 + (n2-1) v2) / (n1 + n2 - 2).
inline TResult pooled_t(const std::vector<double>& a, const std::vector<double>& b) {
    auto mean = [](const std::vector<double>& v) {
        long double s = 0;
        for (double x : v) s += x;
        return s / v.size();
    };
    auto ss = [](const std::vector<double>& v, long double m) {
        long double s = 0;
        for (double x : v) s += (x - m) * (x - m);
        return s;
    };
    const long double m1 = mean(a), m2 = mean(b);
    const long double n1 = a.size(), n2 = b.size();
    const long double s = std::sqrt((ss(a, m1) + ss(b, m2)) / (n1 + n2 - 2));
    return {(m1 - m2) / (s * std::sqrt(1 / n1 + 1 / n2)), s};
}

/// Two-tailed Student-t p-value by Simpson integration. With x = sqrt(df) tan(u)
/// the density becomes c cos^(df-1)(u) on a finite interval, which Simpson
/// handles well for any |t|.
inline long double student_p(double t, int df, int intervals = 20000) {
    const long double nu = df;
    const long double c = std::exp(std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2)) / std::sqrt(static_cast<long double>(M_PI));
    const long double upper = std::atan(std::fabs(static_cast<long double>(t)) / std::sqrt(nu));
    const long double h = upper / intervals;
    auto f = [&](long double u) { return std::pow(std::cos(u), nu - 1); };
    long double acc = f(0) + f(upper);
    for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4 : 2) * f(i * h);
    const long double central = c * acc * h / 3;  // P(0 < T < |t|)
    return std::clamp(1 - 2 * central, 0.0L, 1.0L);
}

/// Shannon entropy in bits, written out longhand.
inline double entropy2(double a, double b) {
    const double n = a + b;
    double h = 0;
    if (a > 0) h -= a / n * std::log2(a / n);
    if (b > 0) h -= b / n * std::log2(b / n);
    return h;
}

}  // namespace oracle
