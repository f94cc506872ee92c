#include "bellbound/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace bellbound::simd {

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported() {
#if defined(BELLBOUND_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}
#endif

namespace {

const KernelTable& pick() {
    const char* want = std::getenv("BELLBOUND_SIMD");
    if (want != nullptr) {
        if (std::strcmp(want, "scalar") == 0) return scalar();
#if defined(__x86_64__) || defined(_M_X64)
        if (std::strcmp(want, "avx2") == 0 && avx2_supported()) return avx2();
#endif
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported()) return avx2();
#endif
    return scalar();
}

} // namespace

const KernelTable& active() {
    static const KernelTable& table = pick();
    return table;
}

std::size_t variant_count() {
#if defined(__x86_64__) || defined(_M_X64)
    return avx2_supported() ? 2 : 1;
#else
    return 1;
#endif
}

const KernelTable& variant(std::size_t i) {
#if defined(__x86_64__) || defined(_M_X64)
    if (i == 1 && avx2_supported()) return avx2();
#endif
    (void)i;
    return scalar();
}

} // namespace bellbound::simd
