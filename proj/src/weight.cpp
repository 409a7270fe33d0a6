#include "halo/weight.hpp"

#include <algorithm>
#include <stdexcept>

namespace halo {

void WeightCharacter::validate() const {
    if (n < 1) throw std::invalid_argument("weight: n >= 1 required");
    if (t.size() != static_cast<size_t>(n) || wild.size() != static_cast<size_t>(n))
        throw std::invalid_argument("weight: t and wild must have length n");
    for (int i = 0; i + 1 < n; ++i)
        if (t[static_cast<size_t>(i)] < t[static_cast<size_t>(i) + 1])
            throw std::invalid_argument("weight: t must be nonincreasing (dominant)");
    for (const WildChar& w : wild)
        if (w.cond < 1) throw std::invalid_argument("weight: conductors are >= 1");
    if (last_trivial) {
        if (wild[static_cast<size_t>(n) - 1].cond != 1 || t[static_cast<size_t>(n) - 1] != 0)
            throw std::invalid_argument("weight: last_trivial asserts chi_n = 1 and t_n = 0");
    }
}

int WeightCharacter::conductor(int i) const { return wild[static_cast<size_t>(i)].cond; }

bool WeightCharacter::tame_nontrivial(int i) const {
    return i < static_cast<int>(tame.size()) && tame[static_cast<size_t>(i)] != 0;
}

TCoords t_coordinates(const WeightCharacter& w, int64_t p) {
    w.validate();
    const int64_t q = (p == 2) ? 4 : p;
    TCoords out;
    for (int i = 0; i < w.n; ++i) {
        const WildChar& chi = w.wild[static_cast<size_t>(i)];
        int r = wild_exponent(p, chi.cond);
        if (r == 0) {
            // chi_i trivial on the one-units: T_i = exp(t_i q) - 1
            const Int& ti = w.t[static_cast<size_t>(i)];
            if (ti == 0) {
                out.vals.push_back(Valuation::inf());
            } else {
                long vq = (p == 2) ? 2 : 1;
                out.vals.push_back(Valuation::of(Rat(vq + int_valuation(ti, Int(p)))));
            }
        } else {
            // q / (p^{c_i - 1}(p - 1)), the valuation of (primitive root) - 1
            Int den = ipow(Int(p), static_cast<unsigned long>(chi.cond - 1)) * (p - 1);
            out.vals.push_back(Valuation::of(Rat(Int(q), den)));
        }
    }
    return out;
}

int ratio_conductor(const WeightCharacter& w, int64_t p, int i, int j) {
    const WildChar& a = w.wild[static_cast<size_t>(i)];
    const WildChar& b = w.wild[static_cast<size_t>(j)];
    int ra = wild_exponent(p, a.cond), rb = wild_exponent(p, b.cond);
    int R = std::max(ra, rb);
    Int pR = ipow(Int(p), static_cast<unsigned long>(R));
    Int E = 0;
    if (R > 0)
        E = (Int(a.k) * ipow(Int(p), static_cast<unsigned long>(R - ra)) -
             Int(b.k) * ipow(Int(p), static_cast<unsigned long>(R - rb))) % pR;
    if (E < 0) E += pR;
    int rr = 0;
    if (E != 0) {
        rr = R;
        while (E % p == 0) {
            E /= p;
            --rr;
        }
    }
    bool tame_diff = (w.tame_nontrivial(i) || w.tame_nontrivial(j)) &&
                     (static_cast<size_t>(i) < w.tame.size() && static_cast<size_t>(j) < w.tame.size()
                          ? w.tame[static_cast<size_t>(i)] != w.tame[static_cast<size_t>(j)]
                          : true);
    return conductor_of(p, tame_diff, rr);
}

RocheData roche_subgroup(const WeightCharacter& w, int64_t p, bool assert_condition1) {
    w.validate();
    const int n = w.n;
    RocheData rd;
    rd.c_matrix.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int cond = assert_condition1 ? std::max(w.conductor(i), w.conductor(j))
                                         : ratio_conductor(w, p, i, j);
            rd.c_matrix[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                (i < j) ? cond / 2 : (cond + 1) / 2;
        }
    // group condition c_ij <= c_ik + c_kj
    for (int i = 0; i < n && rd.group_condition_ok; ++i)
        for (int j = 0; j < n && rd.group_condition_ok; ++j)
            for (int k = 0; k < n; ++k)
                if (rd.c_matrix[static_cast<size_t>(i)][static_cast<size_t>(j)] >
                    rd.c_matrix[static_cast<size_t>(i)][static_cast<size_t>(k)] +
                        rd.c_matrix[static_cast<size_t>(k)][static_cast<size_t>(j)]) {
                    rd.group_condition_ok = false;
                    break;
                }
    if (!rd.group_condition_ok)
        throw std::domain_error("roche_subgroup: congruence depths fail the group condition");

    // index exponent from the sorted conductors of chi_1..chi_{n-1}
    std::vector<int> cs;
    for (int i = 0; i + 1 < n; ++i) cs.push_back(w.conductor(i));
    std::sort(cs.begin(), cs.end());
    Int j_index = 0;
    for (size_t i = 0; i < cs.size(); ++i) j_index += Int(static_cast<long>(i + 1)) * cs[i];
    j_index -= Int(n) * (n - 1) / 2;
    rd.j_index = j_index;
    return rd;
}

SimpleReport is_simple(const WeightCharacter& w, int64_t p, bool assert_condition1) {
    w.validate();
    SimpleReport rep;
    const int n = w.n;
    if (!assert_condition1) {
        for (int i = 0; i < n && rep.simple; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                int rc = ratio_conductor(w, p, i, j);
                int mx = std::max(w.conductor(i), w.conductor(j));
                if (rc != mx) {
                    rep.simple = false;
                    rep.failing = "condition 1 fails at (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + "): cond(ratio) = " + std::to_string(rc) +
                                  " != max = " + std::to_string(mx);
                    break;
                }
            }
    }
    for (int i = 0; i + 1 < n && rep.simple; ++i)
        for (int j = 0; j + 1 < n; ++j) {
            if (i == j) continue;
            if (w.conductor(i) >= 2 * w.conductor(j)) {
                rep.simple = false;
                rep.failing = "condition 2 fails: cond(chi_" + std::to_string(i + 1) +
                              ") = " + std::to_string(w.conductor(i)) + " >= 2 cond(chi_" +
                              std::to_string(j + 1) + ") = " + std::to_string(2 * w.conductor(j));
                break;
            }
        }
    return rep;
}

ShapeReport shape_predicates(const std::map<std::pair<int, int>, int>& c, int n,
                             const std::vector<int>& conds) {
    auto at = [&](int i, int j) -> int {
        if (i <= j) return 0;
        auto it = c.find({i, j});
        return it == c.end() ? 0 : it->second;
    };
    ShapeReport r{true, true, true, true};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (at(i, j) > at(i, k) + at(k, j)) r.group_shaped = false;
    // columns constant, nonincreasing left to right
    for (int j = 0; j + 1 < n; ++j)
        for (int i = j + 2; i < n; ++i)
            if (at(i, j) != at(j + 1, j)) r.analytic_shaped = false;
    for (int j = 0; j + 2 < n; ++j)
        if (at(n - 1, j) < at(n - 1, j + 1)) r.analytic_shaped = false;
    // compatibility, column convention
    for (int j = 0; j < n && j < static_cast<int>(conds.size()); ++j) {
        int mn = -1;
        for (int l = 0; l <= j && l < n; ++l)
            for (int k = l + 1; k < n; ++k) {
                int v = at(k, l);
                if (mn < 0 || v < mn) mn = v;
            }
        if (mn >= 0 && conds[static_cast<size_t>(j)] > mn) r.compatible = false;
    }
    // compatibility, row/column convention
    for (int i = 0; i < n && i < static_cast<int>(conds.size()); ++i) {
        int mn = -1;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            int v = (j < i) ? at(i, j) : at(j, i);
            if (mn < 0 || v < mn) mn = v;
        }
        if (mn >= 0 && conds[static_cast<size_t>(i)] > mn) r.compatible_group = false;
    }
    return r;
}

std::vector<int> minimal_radius_columns(const WeightCharacter& w) {
    w.validate();
    std::vector<int> v(static_cast<size_t>(w.n) - 1, 1);
    for (int j = w.n - 2; j >= 0; --j) {
        int m = (j + 1 < w.n - 1) ? v[static_cast<size_t>(j) + 1] : 1;
        m = std::max(m, w.conductor(j));
        m = std::max(m, w.conductor(j + 1));
        for (int k = j + 1; k < w.n; ++k) m = std::max(m, w.conductor(k));
        v[static_cast<size_t>(j)] = std::max(m, 1);
    }
    return v;
}

}  // namespace halo
