#pragma once

// Independent oracles used by the tests only. These deliberately avoid the
// library's own arithmetic paths: integer polynomial arithmetic in cyclotomic
// fields, quadratic-time hulls, direct enumeration.

#include "halo/rational.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracles {

using halo::Int;
using halo::Rat;

// ---- exact cyclotomic arithmetic in Z[x]/Phi_{p^r}(x) ----------------------

struct CycloField {
    long p;
    int r;  // zeta of order p^r
    std::vector<Int> phi;  // cyclotomic polynomial coefficients, degree phi(p^r)

    explicit CycloField(long p_, int r_) : p(p_), r(r_) {
        // Phi_{p^r}(x) = sum_{k<p} x^{k p^{r-1}}
        long step = 1;
        for (int i = 0; i + 1 < r; ++i) step *= p;
        phi.assign(static_cast<size_t>(step * (p - 1)) + 1, 0);
        for (long k = 0; k < p; ++k) phi[static_cast<size_t>(k * step)] = 1;
    }
    size_t deg() const { return phi.size() - 1; }

    std::vector<Int> reduce(std::vector<Int> a) const {
        while (a.size() > deg()) {
            Int top = a.back();
            a.pop_back();
            if (top == 0) continue;
            for (size_t i = 0; i < deg(); ++i) a[a.size() - deg() + i] -= top * phi[i];
        }
        a.resize(deg() + 0, 0);
        while (a.size() < deg()) a.push_back(0);
        return a;
    }
    std::vector<Int> mul(const std::vector<Int>& a, const std::vector<Int>& b) const {
        std::vector<Int> c(a.size() + b.size() - 1, 0);
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
        }
        return reduce(std::move(c));
    }
    std::vector<Int> zeta_pow(long k) const {
        long m = static_cast<long>(deg() / (p - 1) * p);  // p^r
        k %= m;
        if (k < 0) k += m;
        std::vector<Int> v(static_cast<size_t>(k) + 1, 0);
        v[static_cast<size_t>(k)] = 1;
        return reduce(std::move(v));
    }
};

// exact valuation of N(zeta_{p^r}^k - 1): product over the Galois orbit
inline Rat cyclo_val_zeta_minus_one(long p, int r, long k) {
    CycloField F(p, r);
    long m = 1;
    for (int i = 0; i < r; ++i) m *= p;
    std::vector<Int> acc{1};
    long count = 0;
    for (long a = 0; a < m; ++a) {
        if (a % p == 0) continue;
        std::vector<Int> term = F.zeta_pow(k * a);
        term[0] -= 1;
        acc = F.mul(acc, term);
        ++count;
    }
    if (count != static_cast<long>(F.deg())) throw std::logic_error("orbit size mismatch");
    for (size_t i = 1; i < acc.size(); ++i)
        if (acc[i] != 0) throw std::logic_error("norm not rational");
    Int norm = acc[0];
    if (norm == 0) return Rat(-1);  // zeta^k == 1: caller must handle
    long v = 0;
    Int n = norm < 0 ? -norm : norm;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    if (n != 1) throw std::logic_error("norm not a p-power");
    return Rat(v, static_cast<long>(F.deg()));
}

// ---- quadratic-time lower hull ---------------------------------------------

inline std::vector<std::pair<Int, Rat>> brute_lower_hull(std::vector<std::pair<Int, Rat>> pts) {
    std::sort(pts.begin(), pts.end());
    // keep minimal y per x
    std::map<Int, Rat> best;
    for (auto& [x, y] : pts) {
        auto it = best.find(x);
        if (it == best.end() || y < it->second) best[x] = y;
    }
    std::vector<std::pair<Int, Rat>> uniq(best.begin(), best.end());
    // a point is a hull vertex iff no segment between two other points passes
    // strictly below it, and it is extremal among equal-support lines
    std::vector<std::pair<Int, Rat>> hull;
    for (size_t i = 0; i < uniq.size(); ++i) {
        bool dominated = false;
        for (size_t a = 0; a < uniq.size() && !dominated; ++a)
            for (size_t b = a + 1; b < uniq.size() && !dominated; ++b) {
                if (a == i || b == i) continue;
                const auto& [xa, ya] = uniq[a];
                const auto& [xb, yb] = uniq[b];
                const auto& [xi, yi] = uniq[i];
                if (!(xa < xi && xi < xb)) continue;
                // interpolate
                Rat t = Rat(xi - xa) / Rat(xb - xa);
                Rat y_line = ya + (yb - ya) * t;
                if (y_line <= yi) dominated = true;
            }
        if (!dominated) hull.push_back(uniq[i]);
    }
    return hull;
}

// ---- chain enumeration in the interlacing poset -----------------------------

inline Int chain_count(const std::vector<Int>& t, int n) {
    // count chains of interlacing shapes descending from t; each chain is a
    // basis monomial of the degree-t standard monomial basis
    std::vector<long> lam;
    for (const Int& x : t) lam.push_back((x - t.back()).convert_to<long>());
    std::map<std::vector<long>, Int> layer;
    layer[lam] = 1;
    for (int row = n; row > 1; --row) {
        std::map<std::vector<long>, Int> next;
        for (const auto& [shape, cnt] : layer) {
            // enumerate interlacing shapes of length row-1
            std::vector<long> lo(shape.begin() + 1, shape.end());
            std::vector<long> hi(shape.begin(), shape.end() - 1);
            std::vector<long> cur(lo);
            while (true) {
                next[cur] += cnt;
                int i = static_cast<int>(cur.size()) - 1;
                while (i >= 0 && cur[static_cast<size_t>(i)] == hi[static_cast<size_t>(i)]) --i;
                if (i < 0) break;
                ++cur[static_cast<size_t>(i)];
                for (size_t j = static_cast<size_t>(i) + 1; j < cur.size(); ++j) cur[j] = lo[j];
            }
        }
        layer = std::move(next);
    }
    Int total = 0;
    for (const auto& [shape, cnt] : layer) total += cnt;
    return total;
}

}  // namespace oracles
