#pragma once

#include "halo/padic.hpp"
#include "halo/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace halo {

// Locally algebraic weight: algebraic exponents t_1 >= ... >= t_n, finite wild
// characters with conductors, tame exponents selecting the weight polydisc.
struct WeightCharacter {
    int n = 0;
    std::vector<Int> t;         // dominant
    std::vector<int> tame;      // exponents of the tame character of Delta^n
    std::vector<WildChar> wild; // conductors c_i >= 1
    bool last_trivial = false;  // asserts chi_n trivial and t_n normalized away

    void validate() const;
    Int m(int i) const { return i + 1 < n ? t[static_cast<size_t>(i)] - t[static_cast<size_t>(i) + 1]
                                          : t[static_cast<size_t>(n) - 1]; }  // m_i, 0-based; m_{n-1} = t_n
    int conductor(int i) const;
    bool tame_nontrivial(int i) const;
};

struct TCoords {
    std::vector<Valuation> vals;
};

// v(T_i): v(t_i q) when chi_i is trivial on the one-units, else
// q / (p^{c_i - 1}(p - 1)); infinite when T_i = 0.
TCoords t_coordinates(const WeightCharacter& w, int64_t p);

struct RocheData {
    std::vector<std::vector<int>> c_matrix;  // n x n, zero diagonal
    Int j_index;
    bool group_condition_ok = true;
};

// The compact open subgroup attached to the weight's finite part: the full
// matrix of congruence depths (floor(cond/2) above the diagonal,
// floor((cond+1)/2) below) and the index exponent j with [Iw_p : J] = p^j.
// With assert_condition1, ratio conductors are taken as max(c_i, c_j);
// otherwise they are computed from the character data.
RocheData roche_subgroup(const WeightCharacter& w, int64_t p, bool assert_condition1 = false);

// ratio conductor cond(chi_i chi_j^{-1}) from character data
int ratio_conductor(const WeightCharacter& w, int64_t p, int i, int j);

struct SimpleReport {
    bool simple = true;
    std::string failing;
};
// condition 1: cond(chi_i chi_j^{-1}) = max of the two conductors for all i != j;
// condition 2: cond(chi_i) < 2 cond(chi_j) for all i != j with i, j != n.
SimpleReport is_simple(const WeightCharacter& w, int64_t p, bool assert_condition1 = false);

// Half-matrix predicates on congruence depths c = (c_ij)_{i>j}. Keys are
// (i, j) pairs with 0-based i > j.
struct ShapeReport {
    bool group_shaped;
    bool analytic_shaped;
    bool compatible;        // column convention: c_j <= min over entries in or left of column j
    bool compatible_group;  // row/column convention: c_i <= min of row i and column i entries
};
ShapeReport shape_predicates(const std::map<std::pair<int, int>, int>& c, int n,
                             const std::vector<int>& conds);

// Minimal analytic-shaped radius compatible with the weight's conductors:
// column j takes the value max(c_j, ..., c_n).
std::vector<int> minimal_radius_columns(const WeightCharacter& w);

}  // namespace halo
