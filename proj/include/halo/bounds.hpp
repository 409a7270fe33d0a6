#pragma once

#include "halo/rational.hpp"
#include "halo/weight.hpp"

#include <string>
#include <vector>

namespace halo {

struct BoundPoint {
    Rat x;
    Rat y;
    enum class Kind { lower, upper } kind = Kind::lower;
};

// Exact lower-bound points for M = 0..M_max: with d = n(n-1)/2,
//   x(M) = h sum_{N<=M} binom(N+d-1, d-1),
//   y(M) = h sum_{N<=M} binom(N+d-1, d-1) (N - floor(N/p)) vTa.
// Requires 0 < vTa < 1.
std::vector<BoundPoint> lower_bound_points(int n, int64_t p, int h, const Rat& vTa, int M_max);

// Informational power-law fit y = (A1 x^{1 + 2/(n(n-1))} - C) * vTa: A1 from the
// leading ratio at M = 50, C the minimal shift putting the curve below every
// exact point up to M = 50. Both conservative rational approximations.
struct LowerConstants {
    Rat A1;
    Rat C;
};
LowerConstants lower_bound_constants(int n, int64_t p, int h);

// rational enclosure of x^{1/d} within 1e-9, exact when x is a perfect power
struct RootBounds {
    Rat lo, hi;
    bool exact;
};
RootBounds nth_root_bounds(const Rat& x, int d);

struct UpperPoint {
    BoundPoint pt;        // (h p^{j} d_t, x * l(t))
    Int x_int;
    Rat l_t;              // companion slope sum for a = (n-1, ..., 1, 0)
    bool has_product_form = false;
    Rat product_pow;      // prod v(T_(i))^{2i/(n(n-1))}, approximate
    Rat A2;               // informational fit constant
    bool product_leq_max_vT = false;  // exact verification
};
UpperPoint upper_bound_point(const WeightCharacter& w, int64_t p, int h,
                             const Rat* eps = nullptr, bool assert_condition1 = true);

// Iterated upper-bound points: t^{(k+1)}_i = t^{(k)}_i + (n-i) p^{m_nu(l)+1} phi(q)
// with nu(x) = A1 x^{2/(n(n-1))} min_i v(T_i). Halts with a partial list when the
// exponent exceeds the digit budget.
struct IteratedBounds {
    std::vector<BoundPoint> points;
    bool halted = false;
    std::string reason;
};
IteratedBounds iterated_upper_bounds(const WeightCharacter& w, int64_t p, int h, int k_max,
                                     const Rat& A1, const Int& exponent_budget = Int(200000),
                                     bool assert_condition1 = true);

}  // namespace halo
