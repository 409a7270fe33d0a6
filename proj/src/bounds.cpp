#include "halo/bounds.hpp"

#include "halo/newton.hpp"
#include "halo/rep.hpp"

#include <algorithm>
#include <stdexcept>

namespace halo {

std::vector<BoundPoint> lower_bound_points(int n, int64_t p, int h, const Rat& vTa, int M_max) {
    if (!(vTa > 0 && vTa < 1)) throw std::invalid_argument("lower_bound_points: need 0 < vTa < 1");
    if (n < 2 || h < 1 || M_max < 0) throw std::invalid_argument("lower_bound_points: bad parameters");
    const long d = static_cast<long>(n) * (n - 1) / 2;
    std::vector<BoundPoint> out;
    Int x = 0;
    Rat y = 0;
    for (int N = 0; N <= M_max; ++N) {
        Int block = binom(Int(N + d - 1), d - 1);
        x += Int(h) * block;
        Int weight = Int(N) - Int(N) / p;  // N - floor(N/p), N >= 0
        y += Rat(Int(h) * block * weight) * vTa;
        out.push_back({Rat(x), y, BoundPoint::Kind::lower});
    }
    return out;
}

RootBounds nth_root_bounds(const Rat& x, int d) {
    if (x < 0) throw std::invalid_argument("nth_root_bounds: negative");
    if (d < 1) throw std::invalid_argument("nth_root_bounds: d < 1");
    auto powr = [d](const Rat& v) {
        Rat r = 1;
        for (int i = 0; i < d; ++i) r *= v;
        return r;
    };
    // exactness: integer d-th root of numerator and denominator
    {
        Int nu = numerator(x), de = denominator(x);
        auto iroot = [d](const Int& v) -> std::pair<Int, bool> {
            if (v == 0) return {0, true};
            Int lo = 0, hi = v + 1;
            while (lo + 1 < hi) {
                Int mid = (lo + hi) / 2;
                if (ipow(mid, static_cast<unsigned long>(d)) <= v)
                    lo = mid;
                else
                    hi = mid;
            }
            return {lo, ipow(lo, static_cast<unsigned long>(d)) == v};
        };
        auto [rn, okn] = iroot(nu);
        auto [rd, okd] = iroot(de);
        if (okn && okd) return {Rat(rn, rd), Rat(rn, rd), true};
    }
    Rat lo = 0, hi = x < 1 ? Rat(1) : x;
    const Rat tol(1, 1000000000);
    while (hi - lo > tol) {
        Rat mid = (lo + hi) / 2;
        if (powr(mid) <= x)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi, false};
}

LowerConstants lower_bound_constants(int n, int64_t p, int h) {
    const long d = static_cast<long>(n) * (n - 1) / 2;
    const int M_fit = 50;
    // vTa-normalized points
    std::vector<Rat> xs, ys;
    {
        Int x = 0;
        Rat y = 0;
        for (int N = 0; N <= M_fit; ++N) {
            Int block = binom(Int(N + d - 1), d - 1);
            x += Int(h) * block;
            y += Rat(Int(h) * block * (Int(N) - Int(N) / p));
            xs.push_back(Rat(x));
            ys.push_back(y);
        }
    }
    // A1 = y(50) / x(50)^{1 + 1/d}, rounded down
    RootBounds r50 = nth_root_bounds(xs.back(), static_cast<int>(d));
    Rat A1 = ys.back() / (xs.back() * r50.hi);
    // C: minimal shift putting the curve below every exact point (round up)
    Rat C = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        RootBounds rb = nth_root_bounds(xs[i], static_cast<int>(d));
        Rat gap = A1 * xs[i] * rb.hi - ys[i];
        if (gap > C) C = gap;
    }
    return {A1, C};
}

UpperPoint upper_bound_point(const WeightCharacter& w, int64_t p, int h, const Rat* eps,
                             bool assert_condition1) {
    w.validate();
    const int n = w.n;
    RocheData rd = roche_subgroup(w, p, assert_condition1);
    Int dt = weyl_dim(n, w.t);
    Int x = Int(h) * ipow(Int(p), rd.j_index.convert_to<unsigned long>()) * dt;

    std::vector<Int> a, m;
    for (int i = 0; i < n; ++i) a.push_back(Int(n - 1 - i));
    for (int i = 0; i < n; ++i) m.push_back(w.m(i));
    SlopeBudget sb = slope_budget(n, a, m);

    UpperPoint up;
    up.x_int = x;
    up.l_t = sb.slope_sum;
    up.pt = {Rat(x), Rat(x) * sb.slope_sum, BoundPoint::Kind::upper};

    if (eps) {
        // product form over the sorted nontrivial coordinates
        TCoords tc = t_coordinates(w, p);
        std::vector<Rat> vt;
        for (int i = 0; i + 1 < n; ++i) {
            if (tc.vals[static_cast<size_t>(i)].is_inf())
                throw std::domain_error("upper_bound_point: infinite v(T_i) in product form");
            vt.push_back(tc.vals[static_cast<size_t>(i)].finite());
        }
        std::sort(vt.begin(), vt.end());
        const long nn = static_cast<long>(n) * (n - 1);
        // exact check: prod v_(i)^{2i} <= (max v)^{n(n-1)}
        Rat lhs = 1;
        for (size_t i = 0; i < vt.size(); ++i) {
            Rat pw = 1;
            for (long k = 0; k < 2 * static_cast<long>(i + 1); ++k) pw *= vt[i];
            lhs *= pw;
        }
        Rat rhs = 1;
        Rat mx = vt.back();
        for (long k = 0; k < nn; ++k) rhs *= mx;
        up.product_leq_max_vT = (lhs <= rhs);
        // approximate the product itself for reporting
        RootBounds rb = nth_root_bounds(lhs, static_cast<int>(nn));
        up.product_pow = rb.hi;
        // informational A2 = y / (x^{1+2/(n(n-1))} * product)
        RootBounds rx = nth_root_bounds(Rat(x), static_cast<int>(nn / 2));
        Rat denom = Rat(x) * rx.lo * rb.lo;
        up.A2 = denom > 0 ? up.pt.y / denom : Rat(0);
        up.has_product_form = true;
    }
    return up;
}

IteratedBounds iterated_upper_bounds(const WeightCharacter& w, int64_t p, int h, int k_max,
                                     const Rat& A1, const Int& exponent_budget,
                                     bool assert_condition1) {
    w.validate();
    const int n = w.n;
    const int64_t q = (p == 2) ? 4 : p;
    const Int phi_q = (p == 2) ? Int(2) : Int(p - 1);
    const int d = n * (n - 1) / 2;

    TCoords tc = t_coordinates(w, p);
    Rat min_vT;
    bool have = false;
    for (int i = 0; i + 1 < n; ++i) {
        if (tc.vals[static_cast<size_t>(i)].is_inf()) continue;
        Rat v = tc.vals[static_cast<size_t>(i)].finite();
        if (!have || v < min_vT) {
            min_vT = v;
            have = true;
        }
    }
    if (!have) throw std::domain_error("iterated_upper_bounds: all v(T_i) infinite");
    NuCurve nu = NuCurve::pow(A1 * min_vT, d);

    IteratedBounds out;
    WeightCharacter cur = w;
    for (int k = 0; k <= k_max; ++k) {
        UpperPoint up = upper_bound_point(cur, p, h, nullptr, assert_condition1);
        out.points.push_back(up.pt);
        if (k == k_max) break;
        if (up.l_t <= 0) {
            out.halted = true;
            out.reason = "companion slope sum not positive";
            break;
        }
        Int mk1 = m_nu(nu, up.l_t) + 1;
        if (mk1 > exponent_budget) {
            out.halted = true;
            out.reason = "m_nu exponent " + mk1.str() + " beyond the digit budget";
            break;
        }
        Int shift = ipow(Int(p), mk1.convert_to<unsigned long>()) * phi_q;
        for (int i = 0; i < n; ++i) cur.t[static_cast<size_t>(i)] += Int(n - 1 - i) * shift;
        // dominance and the polydisc congruence are preserved by construction
        for (int i = 0; i + 1 < n; ++i)
            if (cur.t[static_cast<size_t>(i)] < cur.t[static_cast<size_t>(i) + 1])
                throw std::logic_error("iterated_upper_bounds: dominance lost");
        for (int i = 0; i < n; ++i)
            if ((cur.t[static_cast<size_t>(i)] - w.t[static_cast<size_t>(i)]) % phi_q != 0)
                throw std::logic_error("iterated_upper_bounds: polydisc congruence lost");
    }
    (void)q;
    return out;
}

}  // namespace halo
