#include "lceit/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace lceit::simd {

#if defined(LCEIT_HAVE_AVX2)
const KernelTable& avx2_kernel_table() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(LCEIT_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    }();
    return supported ? &avx2_kernel_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() noexcept {
    static const KernelTable& table = []() -> const KernelTable& {
        const char* forced = std::getenv("LCEIT_KERNELS");
        if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_kernels();
        if (const KernelTable* fast = avx2_kernels()) return *fast;
        return scalar_kernels();
    }();
    return table;
}

}  // namespace lceit::simd
