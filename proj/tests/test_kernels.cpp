#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oncoclass/kernels.hpp"

using namespace oncoclass::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

// Relative agreement; summation order differs between variants.
void check_close(double a, double b, double scale) {
    CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, scale));
}

}  // namespace

TEST_CASE("scalar table is always available") {
    REQUIRE(table_for(Isa::kScalar) != nullptr);
    CHECK(isa_name(Isa::kScalar) == "scalar");
}

TEST_CASE("reference kernels on hand-computed inputs") {
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> b{2, 0, -1, 1, 0.5};
    const std::vector<double> w{1, 2, 0, 1, 4};
    CHECK(scalar::dot(a.data(), b.data(), 5) == doctest::Approx(2 + 0 - 3 + 4 + 2.5));
    CHECK(scalar::sum(a.data(), 5) == 15);
    CHECK(scalar::sum_sq_dev(a.data(), 5, 3.0) == 10);
    CHECK(scalar::weighted_sq_dist(a.data(), b.data(), w.data(), 5) ==
          doctest::Approx(1 * 1 + 2 * 4 + 0 + 1 * 9 + 4 * 20.25));
    std::vector<double> y = b;
    scalar::axpy(2.0, a.data(), y.data(), 5);
    CHECK(y == std::vector<double>{4, 4, 5, 9, 10.5});
}

TEST_CASE("avx2 kernels match the scalar reference") {
    const KernelTable* ref = table_for(Isa::kScalar);
    const KernelTable* simd = table_for(Isa::kAvx2);
    if (simd == nullptr) {
        MESSAGE("AVX2 not available on this build or CPU; equivalence not exercised");
        return;
    }
    std::mt19937_64 rng(42);
    // Every tail length around the 4-wide and 16-wide unroll boundaries.
    for (std::size_t n = 0; n <= 67; ++n) {
        CAPTURE(n);
        const auto a = random_vec(rng, n), b = random_vec(rng, n);
        auto w = random_vec(rng, n);
        for (auto& x : w) x = std::fabs(x);
        const double scale = static_cast<double>(n) * 10.0;
        check_close(ref->dot(a.data(), b.data(), n), simd->dot(a.data(), b.data(), n), scale);
        check_close(ref->sum(a.data(), n), simd->sum(a.data(), n), scale);
        check_close(ref->sum_sq_dev(a.data(), n, 0.7), simd->sum_sq_dev(a.data(), n, 0.7), scale);
        check_close(ref->weighted_sq_dist(a.data(), b.data(), w.data(), n),
                    simd->weighted_sq_dist(a.data(), b.data(), w.data(), n), scale);
        // axpy is elementwise: one rounding per element in scalar, one fused in FMA.
        auto y1 = b, y2 = b;
        ref->axpy(-1.3, a.data(), y1.data(), n);
        simd->axpy(-1.3, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(y1[i] - y2[i]) <= 1e-14 * std::max(1.0, std::fabs(y1[i])));
    }
    for (std::size_t n : {1000u, 4097u}) {
        const auto a = random_vec(rng, n), b = random_vec(rng, n);
        check_close(ref->dot(a.data(), b.data(), n), simd->dot(a.data(), b.data(), n), 1e4);
        check_close(ref->sum(a.data(), n), simd->sum(a.data(), n), 1e4);
    }
}

TEST_CASE("active table is one of the known variants") {
    const Isa isa = active_isa();
    CHECK(&active() == table_for(isa));
    if (isa == Isa::kAvx2) CHECK(cpu_supports(Isa::kAvx2));
}
