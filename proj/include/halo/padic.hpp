#pragma once

#include "halo/rational.hpp"

#include <cstdint>
#include <vector>

namespace halo {

struct Elem;

// Truncated ramified cyclotomic extension Z_p[zeta_{p^L}], stored against the
// power basis of the uniformizer pi = zeta_{p^L} - 1. In that basis the
// valuation of a nonzero element is an exact coefficient scan: the candidate
// values v_p(a_i) + i/e all have distinct fractional parts, so the minimum is
// attained once and the ultrametric inequality is an equality.
struct CycloContext {
    int64_t p;
    int64_t q;       // 4 if p == 2, else p
    int wild_level;  // L: the ring contains zeta_{p^L}; supports wild conductors <= L+1
    int tame_order;  // divisor of p-1 (carried; selects the weight polydisc, never valuations)
    int prec;        // K: powers of the uniformizer retained
    int e;           // ramification index phi(p^L), 1 when L == 0
    int coeff_prec;  // M: p-digits per coefficient, e*M >= K
    uint64_t pM;     // p^M

    // red[k], k = 0..e-2: pi^{e+k} rewritten in the power basis (length e), mod p^M
    std::vector<std::vector<uint64_t>> red;

    CycloContext(int64_t p_, int wild_level_, int prec_, int tame_order_ = 1);

    Elem zero() const;
    Elem one() const;
    Elem from_int(const Int& v) const;
    Elem from_residue(uint64_t r) const;
    // primitive p^r-th root of unity, r <= wild_level (r = 1 allowed for p = 2 at any level)
    Elem zeta(int r) const;
    // the (p-1)-st root of unity congruent to a mod p; for p = 2 the sign character of a mod 4
    Elem teichmuller(int64_t a) const;
};

// Ring element with certified precision bookkeeping. `lost` counts p-digits of
// precision given up to exact divisions; coefficients are trustworthy mod
// p^{M - lost}. `exact` marks elements tracked through exact constructions
// only, `known_zero` marks the actual zero element.
struct Elem {
    const CycloContext* ctx = nullptr;
    std::vector<uint64_t> c;
    bool exact = false;
    bool known_zero = false;
    int lost = 0;

    int prec_p() const { return ctx->coeff_prec - lost; }
    bool residue_is_zero() const;

    Elem& operator+=(const Elem& o);
    Elem& operator-=(const Elem& o);
    friend Elem operator+(Elem a, const Elem& b) { return a += b; }
    friend Elem operator-(Elem a, const Elem& b) { return a -= b; }
    friend Elem operator*(const Elem& a, const Elem& b);
    Elem operator-() const;

    Elem scaled(const Int& k) const;   // integer scalar multiple
    Elem pow(const Int& n) const;      // n >= 0
    Elem inv_unit() const;             // requires valuation 0
    Elem div_exact_p(int k) const;     // divide by p^k; throws if residue not divisible
    Elem mul_pi() const;               // multiply by the uniformizer

    // equality of residues mod p^{min precision}
    bool congruent(const Elem& o) const;
};

struct ValResult {
    Valuation val;
    bool is_floor;  // true: certified lower bound only; false: exact valuation
};

// Exact valuation if determinable within precision, else the certified floor.
// valuation(0) is infinite.
ValResult valuation(const Elem& x);

// Finite wild character of the one-units, conductor convention: the trivial
// character has conductor 1; a character of conductor c takes chi(exp(q)) to a
// primitive root of unity of order p^{c-1} (p odd) or 2^{c-2} (p = 2, c >= 3).
struct WildChar {
    int cond = 1;
    int64_t k = 0;  // chi(exp(q)) = zeta^k for the primitive root of that order
};

// exponent r with the value group of chi of conductor c being mu_{p^r}
int wild_exponent(int64_t p, int cond);
// minimal wild_level needed to evaluate conductor-c characters
int required_level(int64_t p, int cond);
// conductor of a character with given tame-nontriviality and wild exponent
int conductor_of(int64_t p, bool tame_nontrivial, int wild_exp);

// chi(u) for a one-unit u in Z_p (u given as the constant coefficient of a
// rational element, u = 1 mod q). Throws if u is not a rational one-unit or
// the conductor exceeds wild_level + 1.
Elem eval_wild_char(const CycloContext& ctx, const WildChar& chi, const Elem& u);
Elem eval_wild_char_residue(const CycloContext& ctx, const WildChar& chi, const Int& u);

// plain Z_p utilities (exact, arbitrary small precision)
Int padic_log_one_unit(const Int& u, int64_t p, int T);  // v(u-1) >= v(q); log(u) mod p^T
Int padic_exp(const Int& x, int64_t p, int T);           // v(x) >= v(q); exp(x) mod p^T
Int teich_residue(int64_t p, const Int& a, int T);       // Teichmuller lift mod p^T

}  // namespace halo
