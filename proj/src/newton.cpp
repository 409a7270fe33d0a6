#include "halo/newton.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace halo {

Rat NewtonPolygon::value_at(const Rat& x) const {
    if (vertices.empty()) throw std::logic_error("value_at: empty polygon");
    if (x < Rat(vertices.front().first) || x > Rat(vertices.back().first))
        throw std::out_of_range("value_at: x outside polygon extent");
    for (size_t i = 0; i + 1 < vertices.size(); ++i) {
        Rat x0 = Rat(vertices[i].first), x1 = Rat(vertices[i + 1].first);
        if (x <= x1) {
            const Rat& y0 = vertices[i].second;
            const Rat& y1 = vertices[i + 1].second;
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    return vertices.back().second;
}

NewtonPolygon lower_hull(const std::vector<std::pair<Int, Valuation>>& pts) {
    std::map<Int, Rat> best;
    bool anchored = false;
    for (const auto& [x, y] : pts) {
        if (x < 0) throw std::invalid_argument("lower_hull: negative x");
        if (y.is_inf()) continue;
        if (x == 0 && y.finite() == 0) anchored = true;
        auto it = best.find(x);
        if (it == best.end() || y.finite() < it->second) best[x] = y.finite();
    }
    if (!anchored || best.find(0) == best.end() || best[0] != 0)
        throw std::invalid_argument("lower_hull: missing (0, 0) anchor");

    NewtonPolygon np;
    std::vector<std::pair<Int, Rat>>& h = np.vertices;
    for (const auto& [x, y] : best) {
        while (h.size() >= 2) {
            const auto& [x1, y1] = h[h.size() - 2];
            const auto& [x2, y2] = h[h.size() - 1];
            // keep the middle point only if it is strictly below the chord
            Rat cross = Rat(x2 - x1) * (y - y1) - (y2 - y1) * Rat(x - x1);
            if (cross <= 0)
                h.pop_back();
            else
                break;
        }
        h.emplace_back(x, y);
    }
    for (size_t i = 0; i + 1 < h.size(); ++i) {
        Rat s = (h[i + 1].second - h[i].second) / Rat(h[i + 1].first - h[i].first);
        np.slopes.emplace_back(s, h[i + 1].first - h[i].first);
    }
    return np;
}

SlopesBelow slopes_below(const NewtonPolygon& np, const Rat& alpha) {
    SlopesBelow r{0, 0, 0};
    size_t k = 0;
    for (; k < np.slopes.size() && np.slopes[k].first < alpha; ++k) r.count += np.slopes[k].second;
    r.end_x = np.vertices[k].first;
    r.end_y = np.vertices[k].second;
    return r;
}

AboveResult lies_above(const NewtonPolygon& np, const std::vector<std::pair<Rat, Rat>>& bound) {
    AboveResult res;
    for (size_t i = 0; i + 1 < bound.size(); ++i)
        if (!(bound[i].first < bound[i + 1].first))
            throw std::invalid_argument("lies_above: bound not sorted by x");
    for (const auto& [bx, by] : bound) {
        if (bx < 0 || bx > Rat(np.extent())) continue;
        Rat py = np.value_at(bx);
        if (py < by) {
            res.ok = false;
            res.witness_x = bx;
            res.bound_y = by;
            res.poly_y = py;
            return res;
        }
    }
    return res;
}

NuCurve NuCurve::lin(Rat a) {
    NuCurve n;
    n.kind = Kind::linear;
    n.a = std::move(a);
    return n;
}

NuCurve NuCurve::pow(Rat a, int d) {
    NuCurve n;
    n.kind = Kind::power;
    n.a = std::move(a);
    n.root_degree = d;
    return n;
}

static Rat rat_pow(const Rat& x, int d) {
    Rat r = 1;
    for (int i = 0; i < d; ++i) r *= x;
    return r;
}

static Int rat_floor(const Rat& x) {
    Int n = numerator(x), d = denominator(x);
    Int q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

Int m_nu(const NuCurve& nu, const Rat& x) {
    if (nu.a <= 0) throw std::invalid_argument("m_nu: nu must be strictly increasing");
    if (x < 0) throw std::invalid_argument("m_nu: x < 0");
    if (nu.kind == NuCurve::Kind::linear) return rat_floor(x * x / nu.a);
    // nu^{-1}(y) = (y/a)^d
    return rat_floor(x * rat_pow(x / nu.a, nu.root_degree));
}

bool nu_hypothesis_holds(const NewtonPolygon& np, const NuCurve& nu) {
    if (nu.a <= 0) throw std::invalid_argument("nu_hypothesis: non-monotone nu");
    // N - x nu(x) is concave on each hull segment, so vertices (plus x = 1) decide
    std::vector<Rat> xs;
    xs.emplace_back(1);
    for (const auto& [x, y] : np.vertices)
        if (x >= 1) xs.emplace_back(Rat(x));
    for (const Rat& x : xs) {
        if (x > Rat(np.extent())) continue;
        Rat N = np.value_at(x);
        if (nu.kind == NuCurve::Kind::linear) {
            if (N < nu.a * x * x) return false;
        } else {
            // N >= a x^{1 + 1/d}  <=>  N^d >= a^d x^{d+1}   (both sides nonnegative)
            if (N < 0) return false;
            if (rat_pow(N, nu.root_degree) < rat_pow(nu.a * x, nu.root_degree) * x) return false;
        }
    }
    return true;
}

bool wan_coincide(const std::vector<Valuation>& v1, const std::vector<Valuation>& v2,
                  const std::vector<Valuation>& diff_vals, const NuCurve& nu, const Rat& alpha) {
    if (v1.empty() || v2.empty()) throw std::invalid_argument("wan_coincide: empty input");
    if (v1[0] != Valuation::of(0) || v2[0] != Valuation::of(0))
        throw std::invalid_argument("wan_coincide: v[0] must be 0");
    Int cutoff = m_nu(nu, alpha) + 1;
    for (const Valuation& d : diff_vals)
        if (d < Valuation::of(Rat(cutoff)))
            throw std::domain_error("wan_coincide: congruence hypothesis fails");

    auto hull_of = [](const std::vector<Valuation>& v) {
        std::vector<std::pair<Int, Valuation>> pts;
        for (size_t i = 0; i < v.size(); ++i) pts.emplace_back(Int(i), v[i]);
        return lower_hull(pts);
    };
    NewtonPolygon n1 = hull_of(v1), n2 = hull_of(v2);
    if (!nu_hypothesis_holds(n1, nu) || !nu_hypothesis_holds(n2, nu))
        throw std::domain_error("wan_coincide: hull below x*nu(x)");

    // compare the sides of slope <= alpha
    auto sides_below = [&](const NewtonPolygon& np) {
        std::vector<std::pair<Rat, Int>> s;
        for (const auto& [sl, mult] : np.slopes)
            if (sl <= alpha) s.emplace_back(sl, mult);
        return s;
    };
    return sides_below(n1) == sides_below(n2);
}

}  // namespace halo
