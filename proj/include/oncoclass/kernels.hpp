#pragma once

// Dense double-precision inner loops shared by the statistics and the
// classifiers. Each kernel has a portable scalar reference and, on x86-64,
// an AVX2/FMA variant; the variant is picked once at startup from CPUID.
// Setting ONCOCLASS_SIMD=scalar in the environment forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace oncoclass::kernels {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
    double (*sum_sq_dev)(const double* a, std::size_t n, double center);
    double (*weighted_sq_dist)(const double* x, const double* mu, const double* w, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

/// Kernel table for a given ISA. Requesting an ISA the build or the CPU
/// lacks returns nullptr.
const KernelTable* table_for(Isa isa);

/// The table selected at startup.
const KernelTable& active();
Isa active_isa();
std::string_view isa_name(Isa isa);
bool cpu_supports(Isa isa);

// Convenience wrappers over the active table. Span lengths must agree.

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }

/// sum_i (a_i - center)^2
inline double sum_sq_dev(std::span<const double> a, double center) {
    return active().sum_sq_dev(a.data(), a.size(), center);
}

/// sum_i w_i (x_i - mu_i)^2
inline double weighted_sq_dist(std::span<const double> x, std::span<const double> mu,
                               std::span<const double> w) {
    return active().weighted_sq_dist(x.data(), mu.data(), w.data(), x.size());
}

/// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sum_sq_dev(const double* a, std::size_t n, double center);
double weighted_sq_dist(const double* x, const double* mu, const double* w, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sum_sq_dev(const double* a, std::size_t n, double center);
double weighted_sq_dist(const double* x, const double* mu, const double* w, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2

}  // namespace oncoclass::kernels
