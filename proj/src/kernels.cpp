#include "oncoclass/kernels.hpp"

#include <cstdlib>
#include <string>

namespace oncoclass::kernels {

namespace {

constexpr KernelTable kScalarTable{
    scalar::dot, scalar::sum, scalar::sum_sq_dev, scalar::weighted_sq_dist, scalar::axpy,
};

#if defined(ONCOCLASS_HAVE_AVX2)
constexpr KernelTable kAvx2Table{
    avx2::dot, avx2::sum, avx2::sum_sq_dev, avx2::weighted_sq_dist, avx2::axpy,
};
#endif

Isa select_isa() {
    if (const char* forced = std::getenv("ONCOCLASS_SIMD")) {
        if (std::string(forced) == "scalar") return Isa::kScalar;
    }
    return cpu_supports(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

struct Selection {
    Isa isa;
    const KernelTable* table;
};

const Selection& selection() {
    static const Selection sel = [] {
        const Isa isa = select_isa();
        return Selection{isa, table_for(isa)};
    }();
    return sel;
}

}  // namespace

bool cpu_supports(Isa isa) {
    switch (isa) {
        case Isa::kScalar:
            return true;
        case Isa::kAvx2:
#if defined(ONCOCLASS_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable* table_for(Isa isa) {
    if (!cpu_supports(isa)) return nullptr;
    switch (isa) {
        case Isa::kScalar:
            return &kScalarTable;
        case Isa::kAvx2:
#if defined(ONCOCLASS_HAVE_AVX2)
            return &kAvx2Table;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

const KernelTable& active() { return *selection().table; }

Isa active_isa() { return selection().isa; }

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::kScalar:
            return "scalar";
        case Isa::kAvx2:
            return "avx2";
    }
    return "unknown";
}

}  // namespace oncoclass::kernels
