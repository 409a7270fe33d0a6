#pragma once

#include "halo/iwahori.hpp"
#include "halo/newton.hpp"
#include "halo/padic.hpp"
#include "halo/weight.hpp"

#include <map>
#include <string>
#include <vector>

namespace halo {

// Synthetic gluing data standing in for the finite class set: h components and,
// per (coset representative, component), a target component with an Iwahori
// twist. Absent entries glue trivially (target = component, twist = identity).
struct GluingEntry {
    int target = 0;  // 0-based
    std::vector<std::vector<Int>> twist;
};
struct GlobalData {
    int h = 1;
    std::map<std::pair<int, int>, GluingEntry> gluing;  // (rep index, component)

    static GlobalData trivial(int h = 1);
    void validate(int n, int64_t p) const;
};

// Left-coset representatives of Iw u^a Iw: upper-unipotent N(y) u^a with
// y_ij running over residues mod p^{a_i - a_j} for i < j, in lexicographic
// order. Cardinality p^{sum_{i<j}(a_i - a_j)}.
std::vector<std::vector<std::vector<Int>>> coset_reps(int n, int64_t p, const std::vector<Int>& a);
Int coset_count(int n, int64_t p, const std::vector<Int>& a);

struct UpBasisLabel {
    int component;
    size_t ball;
    int mono;
};

// Truncated matrix of U_p^a on the per-ball monomial basis of the h components,
// stored as one plane of 64-bit residues per ring-coefficient slot. Row r,
// column c holds the coefficient of basis_r in U_p(basis_c). Rows carry
// certified valuation floors: the scaling stage deposits p^{delta_s} on every
// output power of w_s, so an output row of multidegree e is divisible by
// p^{sum_s min(delta_s, 1 + c_s) e_s} across all columns, including the ones
// beyond the degree cap. Observed entry valuations sharpen the floor.
struct UpMatrix {
    const CycloContext* ctx = nullptr;
    WeightCharacter w;
    BallRadii radii;
    int cap = 0;
    int h = 1;
    std::vector<Int> a;
    size_t dim = 0;
    std::vector<std::vector<uint64_t>> plane;
    int lost = 0;
    std::vector<Valuation> row_floor;
    Rat excluded_row_floor;  // structural floor of every row of degree cap + 1

    size_t index_of(int comp, size_t ball, int mono) const;
    UpBasisLabel label(size_t idx) const;
    Elem entry(size_t row, size_t col) const;
    bool is_identity() const;
    bool is_diagonal() const;
};

// Assembles the double-coset operator from its left-coset terms: per term, a
// twist translation, the diagonal scaling, and the unipotent translation,
// composed as ball-block operators. Radii: minimal analytic-shaped radii
// forced by the weight, or the single-ball polynomial model when the finite
// part is trivial on one-units (and, for p = 2, tame-trivial).
UpMatrix assemble_up(const CycloContext& ctx, const WeightCharacter& w, const GlobalData& g,
                     const std::vector<Int>& a, int cap);
UpMatrix assemble_up(const CycloContext& ctx, const WeightCharacter& w, const GlobalData& g,
                     const std::vector<Int>& a, int cap, const BallRadii& radii);

// Matrix of the bare translation by u^a (no coset sum, no gluing), for the
// scaling-diagonality checks.
UpMatrix assemble_scaling(const CycloContext& ctx, const WeightCharacter& w,
                          const std::vector<Int>& a, int cap, const BallRadii& radii);

struct CharCoefficient {
    int N;
    Elem value;
    Valuation val;
    bool val_is_floor;
    bool certified;
};
struct CharSeries {
    std::vector<CharCoefficient> coeff;
    int N_max = 0;

    std::vector<std::pair<Int, Valuation>> points(bool allow_floors = false) const;
};

// det(1 - X U_p^a) coefficients via power traces and the Newton identities;
// each coefficient is flagged certified when the truncation-error bound from
// the column floors guarantees its valuation exactly.
CharSeries char_series(const UpMatrix& M, int N_max);

// worker count: HALO_THREADS when set, else hardware concurrency
unsigned worker_count();

}  // namespace halo
