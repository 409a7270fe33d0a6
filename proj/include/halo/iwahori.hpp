#pragma once

#include "halo/modmat.hpp"
#include "halo/padic.hpp"
#include "halo/weight.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace halo {

inline constexpr int kMaxVars = 6;  // n(n-1)/2 for n <= 4
using Expo = std::array<uint8_t, kMaxVars>;

// Graded-lex monomial table for dense truncated series in d variables of total
// degree <= cap, with a product index table.
struct MonoTable {
    int nvars = 0, cap = 0;
    std::vector<Expo> expo;
    std::vector<int> degree;
    std::vector<std::vector<int32_t>> prod;  // -1 when the product exceeds the cap
    std::map<Expo, int> index;

    static const MonoTable& get(int nvars, int cap);
    int find(const Expo& e) const {
        auto it = index.find(e);
        return it == index.end() ? -1 : it->second;
    }
};

// Dense truncated polynomial with ring coefficients.
struct Series {
    const MonoTable* tab = nullptr;
    std::vector<Elem> c;

    static Series zero(const MonoTable& t, const CycloContext& ctx);
    static Series constant(const MonoTable& t, Elem v);
    Series& axpy(const Elem& s, const Series& o);  // this += s * o
    friend Series operator*(const Series& a, const Series& b);
    friend Series operator+(Series a, const Series& b);
    Series scale(const Elem& s) const;
    Series inverse_unit() const;  // constant term a unit
    // minimal valuation floor over the coefficients of degree >= mindeg
    Rat min_floor(int mindeg = 0) const;
};

// Plucker coordinate: determinant of the rows sigma, first j columns.
Elem plucker(const std::vector<std::vector<Elem>>& x, int j, const std::vector<int>& sigma);

// Symbolic minors Z_{j,tau}(Nbar(z)) as integer polynomials in the coordinates
// z_(i,j), i > j; each monomial carries an explicit power of p. Variables are
// ordered by column then row.
struct ZTerm {
    Expo e;
    int ppow;
    int sgn;
};
struct ZPoly {
    std::vector<ZTerm> terms;
};
int var_id(int n, int i, int j);
const std::vector<std::vector<ZPoly>>& z_minors(int n);          // [j-1][tau-rank]
const std::vector<std::vector<std::vector<int>>>& subsets(int n);  // subsets[j] = size-j subsets

// Analytic radii: one radius per column (analytic-shaped by construction).
// All-zero radii select the single-ball polynomial model, valid for weights
// whose wild parts are trivial.
struct BallRadii {
    int n = 0;
    std::vector<int> col;  // size n-1

    int slot_radius(int slot) const;
    int nvars() const { return n * (n - 1) / 2; }
    size_t ball_count(int64_t p) const;
    std::vector<uint64_t> ball_center(int64_t p, size_t id) const;  // per-slot residues
    size_t ball_id(int64_t p, const std::vector<uint64_t>& center) const;
};

// Truncated c-locally-analytic function: per ball, a polynomial of total
// degree <= cap in the recentered coordinates w = (z - a)/p^c.
struct TruncatedFunction {
    const CycloContext* ctx = nullptr;
    WeightCharacter w;
    BallRadii radii;
    int cap = 0;
    std::vector<Series> balls;
    Valuation tail_floor = Valuation::inf();  // floor for omitted degree > cap content

    static TruncatedFunction zero(const CycloContext& ctx, const WeightCharacter& w,
                                  const BallRadii& r, int cap, int64_t p);
    // basis monomial: component-free single (ball, exponent) function
    static TruncatedFunction basis(const CycloContext& ctx, const WeightCharacter& w,
                                   const BallRadii& r, int cap, int64_t p, size_t ball, int mono);
    // evaluate at an integer point z (per-slot residues), exact mod the precision
    Elem eval(const std::vector<Int>& z) const;
};

// Ball-block operator: for each output ball, the input ball it reads and the
// dense matrix (out-mono x in-mono) of the transform, plus a floor for the
// discarded degree > cap rows of each input column.
struct BlockOp {
    const MonoTable* tab = nullptr;
    int64_t p = 0;
    std::vector<int> in_ball;             // per out-ball; -1 for zero block
    std::vector<std::vector<Elem>> mat;   // per out-ball, row-major (out, in)
    std::vector<Rat> col_drop_floor;      // per in-mono degree floor of dropped rows

    TruncatedFunction apply(const TruncatedFunction& f) const;
};

// compose: first apply b, then a
BlockOp compose(const BlockOp& a, const BlockOp& b);

// Left translation by an Iwahori matrix u (integer entries, upper triangular
// mod p with unit diagonal): (u f)(Nbar(z)) = s(T(u, z)) f(Nbar(uz)).
BlockOp act_op(const CycloContext& ctx, const WeightCharacter& w, const BallRadii& r, int cap,
               const std::vector<std::vector<Int>>& u);

// Diagonal translation by u^a = diag(p^{a_1}, ..., p^{a_n}).
BlockOp scale_op(const CycloContext& ctx, const WeightCharacter& w, const BallRadii& r, int cap,
                 const std::vector<Int>& a);

TruncatedFunction act(const CycloContext& ctx, const std::vector<std::vector<Int>>& u,
                      const TruncatedFunction& f);

// Exact p-power by which u^a scales the monomial z^e: sum over slots of
// (a_j - a_i) e_{ij}. Throws when a is not nonincreasing.
Int scale_exponents(const std::vector<Int>& a, const std::vector<int>& e);

}  // namespace halo
