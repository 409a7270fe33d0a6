#pragma once

#include <cstddef>
#include <cstdint>

// Modular vector kernels for the coefficient arithmetic behind truncated-matrix
// power traces. Scalar reference versions are always available; an AVX2 variant
// is selected at runtime for moduli below 2^28, where raw 64-bit lanes can hold
// deferred sums of 56-bit products. Set HALO_SIMD=scalar to force the reference
// path.

namespace halo::kern {

struct Kernels {
    // acc[i] += a * b[i], no reduction. Caller keeps a, b[i] < m and bounds the
    // number of deferred accumulations so 64-bit lanes cannot overflow.
    void (*axpy_acc)(uint64_t* acc, const uint64_t* b, uint64_t a, size_t len);
    // acc[i] %= m
    void (*reduce_mod)(uint64_t* acc, size_t len, uint64_t m);
    // dst[i] = (dst[i] + b[i]) % m, inputs already reduced
    void (*add_mod)(uint64_t* dst, const uint64_t* b, size_t len, uint64_t m);
    const char* name;
};

const Kernels& scalar_kernels();
const Kernels* avx2_kernels();  // nullptr when unsupported at runtime

// Dispatch for a given modulus: AVX2 requires m < 2^28.
const Kernels& kernels_for(uint64_t m);

// Number of axpy_acc calls that may be deferred between reductions for a
// modulus m (at least 1).
size_t deferred_budget(uint64_t m);

// Scalar helpers used by the ring arithmetic (any m < 2^62).
inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}
inline uint64_t addmod(uint64_t a, uint64_t b, uint64_t m) {
    uint64_t s = a + b;
    if (s >= m || s < a) s -= m;
    return s;
}
inline uint64_t submod(uint64_t a, uint64_t b, uint64_t m) { return a >= b ? a - b : a + (m - b); }

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);
// Inverse of a unit modulo m (m any modulus, gcd(a, m) = 1).
uint64_t invmod(uint64_t a, uint64_t m);

}  // namespace halo::kern
