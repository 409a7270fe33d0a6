#include "halo/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace halo::kern {

namespace {

void axpy_acc_scalar(uint64_t* acc, const uint64_t* b, uint64_t a, size_t len) {
    for (size_t i = 0; i < len; ++i) acc[i] += a * b[i];
}

void reduce_mod_scalar(uint64_t* acc, size_t len, uint64_t m) {
    for (size_t i = 0; i < len; ++i) acc[i] %= m;
}

void add_mod_scalar(uint64_t* dst, const uint64_t* b, size_t len, uint64_t m) {
    for (size_t i = 0; i < len; ++i) dst[i] = addmod(dst[i], b[i], m);
}

const Kernels g_scalar = {axpy_acc_scalar, reduce_mod_scalar, add_mod_scalar, "scalar"};

bool simd_disabled_by_env() {
    const char* e = std::getenv("HALO_SIMD");
    return e && std::strcmp(e, "scalar") == 0;
}

}  // namespace

const Kernels& scalar_kernels() { return g_scalar; }

const Kernels& kernels_for(uint64_t m) {
    if (!simd_disabled_by_env() && m < (uint64_t(1) << 28)) {
        if (const Kernels* k = avx2_kernels()) return *k;
    }
    return g_scalar;
}

size_t deferred_budget(uint64_t m) {
    if (m < 2) return size_t(1) << 40;
    // products are < m^2; lanes hold up to 2^64 - 1
    unsigned bits = 0;
    uint64_t x = m - 1;
    while (x) {
        ++bits;
        x >>= 1;
    }
    unsigned prod_bits = 2 * bits;
    if (prod_bits >= 63) return 1;
    return size_t(1) << (63 - prod_bits);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

uint64_t invmod(uint64_t a, uint64_t m) {
    // extended Euclid on signed 128-bit to dodge overflow
    __int128 t = 0, newt = 1;
    __int128 r = m, newr = a % m;
    while (newr != 0) {
        __int128 q = r / newr;
        __int128 tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw std::invalid_argument("invmod: not a unit");
    if (t < 0) t += m;
    return static_cast<uint64_t>(t);
}

}  // namespace halo::kern
