#pragma once

#include "halo/kernels.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace halo {

// Dense n x n matrix over Z/m, m a prime power fitting the 64-bit budget.
struct ModMat {
    int n = 0;
    uint64_t m = 0;
    std::vector<uint64_t> a;

    ModMat() = default;
    ModMat(int n_, uint64_t m_) : n(n_), m(m_), a(static_cast<size_t>(n_) * n_, 0) {}
    static ModMat identity(int n, uint64_t m) {
        ModMat r(n, m);
        for (int i = 0; i < n; ++i) r(i, i) = 1 % m;
        return r;
    }
    uint64_t& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    uint64_t operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    friend ModMat operator*(const ModMat& x, const ModMat& y) {
        ModMat r(x.n, x.m);
        for (int i = 0; i < x.n; ++i)
            for (int k = 0; k < x.n; ++k) {
                uint64_t v = x(i, k);
                if (!v) continue;
                for (int j = 0; j < x.n; ++j)
                    r(i, j) = kern::addmod(r(i, j), kern::mulmod(v, y(k, j), x.m), x.m);
            }
        return r;
    }
    friend bool operator==(const ModMat& x, const ModMat& y) { return x.n == y.n && x.a == y.a; }

    // Gauss-Jordan over the local ring; pivots must be units.
    ModMat inverse(uint64_t p) const {
        ModMat L = *this, R = identity(n, m);
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int r = col; r < n; ++r)
                if (L(r, col) % p != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) throw std::invalid_argument("ModMat::inverse: not invertible");
            if (piv != col)
                for (int j = 0; j < n; ++j) {
                    std::swap(L.a[static_cast<size_t>(piv) * n + j], L.a[static_cast<size_t>(col) * n + j]);
                    std::swap(R.a[static_cast<size_t>(piv) * n + j], R.a[static_cast<size_t>(col) * n + j]);
                }
            uint64_t inv = kern::invmod(L(col, col), m);
            for (int j = 0; j < n; ++j) {
                L(col, j) = kern::mulmod(L(col, j), inv, m);
                R(col, j) = kern::mulmod(R(col, j), inv, m);
            }
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                uint64_t f = L(r, col);
                if (!f) continue;
                for (int j = 0; j < n; ++j) {
                    L(r, j) = kern::submod(L(r, j), kern::mulmod(f, L(col, j), m), m);
                    R(r, j) = kern::submod(R(r, j), kern::mulmod(f, R(col, j), m), m);
                }
            }
        }
        return R;
    }

    // packs entries into a hash key; requires n^2 * ceil(log2 m) <= 64
    uint64_t key() const {
        uint64_t k = 0;
        for (uint64_t v : a) k = k * m + v;
        return k;
    }
};

// Iwahori (LDU) factorization g = Nbar * T * N with Nbar unit-lower, T diagonal,
// N unit-upper; requires unit leading minors (true for Iwahori matrices).
struct LDU {
    ModMat lower, diag, upper;
};
inline LDU iwahori_factor(const ModMat& g, uint64_t p) {
    const int n = g.n;
    const uint64_t m = g.m;
    ModMat U = g;
    ModMat L = ModMat::identity(n, m);
    for (int col = 0; col < n; ++col) {
        if (U(col, col) % p == 0) throw std::invalid_argument("iwahori_factor: pivot not a unit");
        uint64_t inv = kern::invmod(U(col, col), m);
        for (int r = col + 1; r < n; ++r) {
            uint64_t f = kern::mulmod(U(r, col), inv, m);
            L(r, col) = f;
            if (!f) continue;
            for (int j = 0; j < n; ++j) U(r, j) = kern::submod(U(r, j), kern::mulmod(f, U(col, j), m), m);
        }
    }
    LDU out;
    out.lower = L;
    out.diag = ModMat::identity(n, m);
    out.upper = ModMat::identity(n, m);
    for (int i = 0; i < n; ++i) {
        out.diag(i, i) = U(i, i);
        uint64_t inv = kern::invmod(U(i, i), m);
        for (int j = i; j < n; ++j) out.upper(i, j) = kern::mulmod(U(i, j), inv, m);
    }
    return out;
}

}  // namespace halo
