#include "halo/padic.hpp"

#include "halo/kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace halo {

namespace {

int64_t ipow64(int64_t b, int e) {
    int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

uint64_t reduce_int(const Int& v, uint64_t m) {
    Int r = v % Int(m);
    if (r < 0) r += Int(m);
    return r.convert_to<uint64_t>();
}

int vp_residue(uint64_t r, uint64_t p, int cap) {
    // valuation of the residue r, capped at `cap` (r meaningful mod p^cap)
    if (r == 0) return cap;
    int v = 0;
    while (v < cap && r % p == 0) {
        r /= p;
        ++v;
    }
    return v;
}

}  // namespace

CycloContext::CycloContext(int64_t p_, int wild_level_, int prec_, int tame_order_)
    : p(p_), q(p_ == 2 ? 4 : p_), wild_level(wild_level_), tame_order(tame_order_), prec(prec_) {
    if (p < 2) throw std::invalid_argument("CycloContext: p must be prime >= 2");
    if (wild_level < 0 || prec < 1) throw std::invalid_argument("CycloContext: bad parameters");
    if (wild_level == 0)
        e = 1;
    else
        e = static_cast<int>(ipow64(p, wild_level - 1) * (p - 1));
    coeff_prec = (prec + e - 1) / e;
    // keep products of coefficients inside unsigned __int128 with slack
    double bits = coeff_prec * std::log2(static_cast<double>(p));
    if (bits > 61.5) throw std::invalid_argument("CycloContext: p^M exceeds the 64-bit budget");
    Int m = ipow(Int(p), static_cast<unsigned long>(coeff_prec));
    pM = m.convert_to<uint64_t>();

    if (e > 1) {
        // minimal polynomial of pi: Phi_{p^L}(x+1) = sum_{k<p} (x+1)^{k p^{L-1}}
        std::vector<Int> mp(static_cast<size_t>(e) + 1, 0);
        int64_t step = ipow64(p, wild_level - 1);
        for (int64_t k = 0; k < p; ++k) {
            long d = static_cast<long>(k * step);
            for (long i = 0; i <= d; ++i) mp[static_cast<size_t>(i)] += binom(Int(d), i);
        }
        // x^e = -(mp[e-1] x^{e-1} + ... + mp[0]); mp is monic
        std::vector<uint64_t> row(static_cast<size_t>(e));
        for (int i = 0; i < e; ++i) row[static_cast<size_t>(i)] = reduce_int(-mp[static_cast<size_t>(i)], pM);
        red.push_back(row);
        for (int k = 1; k < e - 1; ++k) {
            // x^{e+k} = x * x^{e+k-1}
            const std::vector<uint64_t>& prev = red.back();
            std::vector<uint64_t> nxt(static_cast<size_t>(e), 0);
            uint64_t top = prev[static_cast<size_t>(e) - 1];
            for (int i = e - 1; i >= 1; --i) nxt[static_cast<size_t>(i)] = prev[static_cast<size_t>(i) - 1];
            if (top) {
                const std::vector<uint64_t>& r0 = red.front();
                for (int i = 0; i < e; ++i)
                    nxt[static_cast<size_t>(i)] =
                        kern::addmod(nxt[static_cast<size_t>(i)],
                                     kern::mulmod(top, r0[static_cast<size_t>(i)], pM), pM);
            }
            red.push_back(nxt);
        }
    }
}

Elem CycloContext::zero() const {
    Elem x;
    x.ctx = this;
    x.c.assign(static_cast<size_t>(e), 0);
    x.exact = true;
    x.known_zero = true;
    return x;
}

Elem CycloContext::one() const { return from_int(1); }

Elem CycloContext::from_int(const Int& v) const {
    Elem x = zero();
    x.c[0] = reduce_int(v, pM);
    x.known_zero = (v == 0);
    return x;
}

Elem CycloContext::from_residue(uint64_t r) const {
    Elem x = zero();
    x.c[0] = r % pM;
    x.known_zero = (x.c[0] == 0);
    return x;
}

Elem CycloContext::zeta(int r) const {
    if (r == 0) return one();
    if (p == 2 && r == 1) return from_int(-1);
    if (r > wild_level) throw std::invalid_argument("zeta: order beyond wild_level");
    Elem z = zero();
    z.c[0] = 1 % pM;
    if (e > 1) z.c[1] = 1;  // pi + 1 = zeta_{p^L}
    z.known_zero = false;
    Int ex = ipow(Int(p), static_cast<unsigned long>(wild_level - r));
    return z.pow(ex);
}

Elem CycloContext::teichmuller(int64_t a) const {
    if (p == 2) {
        int64_t r = ((a % 4) + 4) % 4;
        if (r % 2 == 0) throw std::invalid_argument("teichmuller: not a unit");
        return from_int(r == 1 ? 1 : -1);
    }
    if (((a % p) + p) % p == 0) throw std::invalid_argument("teichmuller: not a unit");
    uint64_t x = reduce_int(Int(a), pM);
    for (int i = 0; i < coeff_prec; ++i) x = kern::powmod(x, static_cast<uint64_t>(p), pM);
    return from_residue(x);
}

bool Elem::residue_is_zero() const {
    for (uint64_t v : c)
        if (v) return false;
    return true;
}

Elem& Elem::operator+=(const Elem& o) {
    if (ctx != o.ctx) throw std::invalid_argument("Elem: context mismatch");
    for (size_t i = 0; i < c.size(); ++i) c[i] = kern::addmod(c[i], o.c[i], ctx->pM);
    exact = exact && o.exact;
    known_zero = known_zero && o.known_zero;
    lost = std::max(lost, o.lost);
    return *this;
}

Elem& Elem::operator-=(const Elem& o) {
    if (ctx != o.ctx) throw std::invalid_argument("Elem: context mismatch");
    for (size_t i = 0; i < c.size(); ++i) c[i] = kern::submod(c[i], o.c[i], ctx->pM);
    exact = exact && o.exact;
    known_zero = known_zero && o.known_zero;
    lost = std::max(lost, o.lost);
    return *this;
}

Elem Elem::operator-() const {
    Elem r = *this;
    for (auto& v : r.c) v = v ? ctx->pM - v : 0;
    return r;
}

Elem operator*(const Elem& a, const Elem& b) {
    if (a.ctx != b.ctx) throw std::invalid_argument("Elem: context mismatch");
    const CycloContext& ctx = *a.ctx;
    const int e = ctx.e;
    const uint64_t m = ctx.pM;
    Elem r = ctx.zero();
    if (a.known_zero || b.known_zero) {
        r.exact = a.exact && b.exact;
        return r;
    }
    std::vector<uint64_t> full(static_cast<size_t>(2 * e - 1), 0);
    for (int i = 0; i < e; ++i) {
        if (!a.c[static_cast<size_t>(i)]) continue;
        for (int j = 0; j < e; ++j) {
            if (!b.c[static_cast<size_t>(j)]) continue;
            unsigned __int128 prod =
                static_cast<unsigned __int128>(a.c[static_cast<size_t>(i)]) * b.c[static_cast<size_t>(j)];
            size_t k = static_cast<size_t>(i + j);
            full[k] = kern::addmod(full[k], static_cast<uint64_t>(prod % m), m);
        }
    }
    for (int i = 0; i < e; ++i) r.c[static_cast<size_t>(i)] = full[static_cast<size_t>(i)];
    for (int k = 0; k < e - 1; ++k) {
        uint64_t hi = full[static_cast<size_t>(e + k)];
        if (!hi) continue;
        const std::vector<uint64_t>& row = ctx.red[static_cast<size_t>(k)];
        for (int i = 0; i < e; ++i)
            r.c[static_cast<size_t>(i)] =
                kern::addmod(r.c[static_cast<size_t>(i)], kern::mulmod(hi, row[static_cast<size_t>(i)], m), m);
    }
    r.exact = a.exact && b.exact;
    r.known_zero = false;
    r.lost = std::max(a.lost, b.lost);
    return r;
}

Elem Elem::scaled(const Int& k) const {
    Elem r = *this;
    uint64_t kr = reduce_int(k, ctx->pM);
    for (auto& v : r.c) v = kern::mulmod(v, kr, ctx->pM);
    r.known_zero = known_zero || (k == 0 && exact);
    return r;
}

Elem Elem::pow(const Int& n) const {
    if (n < 0) throw std::invalid_argument("Elem::pow: negative");
    Elem r = ctx->one(), x = *this;
    r.lost = lost;
    Int k = n;
    while (k > 0) {
        if ((k & 1) != 0) r = r * x;
        x = x * x;
        k >>= 1;
    }
    return r;
}

Elem Elem::inv_unit() const {
    ValResult v = valuation(*this);
    if (v.val != Valuation::of(0)) throw std::invalid_argument("inv_unit: not a unit");
    // Newton iteration x <- x(2 - a x), quadratic convergence in pi
    Elem x = ctx->from_residue(kern::invmod(c[0] % ctx->p, static_cast<uint64_t>(ctx->p)));
    x.lost = lost;
    Elem two = ctx->from_int(2);
    int needed = ctx->e * ctx->coeff_prec;
    for (int done = 1; done < 2 * needed; done *= 2) x = x * (two - (*this * x));
    x.exact = false;
    return x;
}

Elem Elem::div_exact_p(int k) const {
    if (k == 0) return *this;
    Elem r = *this;
    uint64_t pk = 1;
    for (int i = 0; i < k; ++i) pk *= static_cast<uint64_t>(ctx->p);
    for (auto& v : r.c) {
        if (v % pk != 0) throw std::domain_error("div_exact_p: residue not divisible");
        v /= pk;
    }
    r.lost = lost + k;
    if (r.lost >= ctx->coeff_prec) throw std::domain_error("div_exact_p: precision exhausted");
    return r;
}

Elem Elem::mul_pi() const {
    const int e = ctx->e;
    Elem r = ctx->zero();
    r.exact = exact;
    r.known_zero = known_zero;
    r.lost = lost;
    if (e == 1) {
        // L = 0: no genuine uniformizer beyond p itself
        r.c[0] = kern::mulmod(c[0], static_cast<uint64_t>(ctx->p), ctx->pM);
        return r;
    }
    uint64_t top = c[static_cast<size_t>(e) - 1];
    for (int i = e - 1; i >= 1; --i) r.c[static_cast<size_t>(i)] = c[static_cast<size_t>(i) - 1];
    r.c[0] = 0;
    if (top) {
        const std::vector<uint64_t>& row = ctx->red[0];
        for (int i = 0; i < e; ++i)
            r.c[static_cast<size_t>(i)] = kern::addmod(
                r.c[static_cast<size_t>(i)], kern::mulmod(top, row[static_cast<size_t>(i)], ctx->pM), ctx->pM);
    }
    r.known_zero = false;
    return r;
}

bool Elem::congruent(const Elem& o) const {
    if (ctx != o.ctx) return false;
    int prec = std::min(prec_p(), o.prec_p());
    Int pk = ipow(Int(ctx->p), static_cast<unsigned long>(prec));
    uint64_t m = pk.convert_to<uint64_t>();
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] % m != o.c[i] % m) return false;
    return true;
}

ValResult valuation(const Elem& x) {
    const CycloContext& ctx = *x.ctx;
    if (x.known_zero) return {Valuation::inf(), false};
    const int cap = x.prec_p();
    bool found = false;
    Rat best;
    for (int i = 0; i < ctx.e; ++i) {
        uint64_t r = x.c[static_cast<size_t>(i)];
        int vi = vp_residue(r, static_cast<uint64_t>(ctx.p), cap);
        if (vi >= cap) continue;
        Rat cand = Rat(vi) + Rat(i, ctx.e);
        if (!found || cand < best) {
            best = cand;
            found = true;
        }
    }
    if (!found) return {Valuation::of(Rat(cap)), true};
    return {Valuation::of(best), false};
}

int wild_exponent(int64_t p, int cond) {
    if (cond <= 1) return 0;
    if (p == 2) return cond <= 2 ? 0 : cond - 2;
    return cond - 1;
}

int required_level(int64_t p, int cond) { return wild_exponent(p, cond); }

int conductor_of(int64_t p, bool tame_nontrivial, int wild_exp) {
    if (wild_exp == 0) return tame_nontrivial ? (p == 2 ? 2 : 1) : 1;
    return p == 2 ? wild_exp + 2 : wild_exp + 1;
}

Int padic_log_one_unit(const Int& u, int64_t p, int T) {
    const int64_t q = (p == 2) ? 4 : p;
    Int pT = ipow(Int(p), static_cast<unsigned long>(T));
    Int x = u % pT;
    if (x < 0) x += pT;
    Int xm1 = (x - 1) % pT;
    if (xm1 < 0) xm1 += pT;
    if (xm1 % q != 0) throw std::invalid_argument("padic_log_one_unit: u != 1 mod q");
    // guard digits for the divisions by j
    int G = 2;
    for (Int t = T; t > 0; t /= p) ++G;
    Int mod = ipow(Int(p), static_cast<unsigned long>(T + G));
    Int y = u % mod;
    if (y < 0) y += mod;
    Int z = (y - 1) % mod;
    Int term = 1, acc = 0;
    int vq = (p == 2) ? 2 : 1;
    int jmax = (T + G) / vq + 2;
    Int zpow = 1;
    for (int j = 1; j <= jmax; ++j) {
        zpow = (zpow * z) % mod;
        // term_j = (-1)^{j+1} z^j / j ; split j = p^vj * j'
        Int jj = j;
        int vj = 0;
        while (jj % p == 0) {
            jj /= p;
            ++vj;
        }
        Int num = zpow;
        for (int s = 0; s < vj; ++s) {
            if (num % p != 0) throw std::logic_error("padic_log: division mismatch");
            num /= p;
        }
        Int modj = ipow(Int(p), static_cast<unsigned long>(T + G - vj));
        Int inv_jj = 0;
        {
            // modular inverse of jj
            Int t0 = 0, t1 = 1, r0 = modj, r1 = jj % modj;
            while (r1 != 0) {
                Int qq = r0 / r1;
                Int tmp = t0 - qq * t1;
                t0 = t1;
                t1 = tmp;
                tmp = r0 - qq * r1;
                r0 = r1;
                r1 = tmp;
            }
            inv_jj = t0 % modj;
            if (inv_jj < 0) inv_jj += modj;
        }
        term = (num % modj) * inv_jj % modj;
        if (j % 2 == 0) term = -term;
        acc = (acc + term) % pT;
    }
    acc %= pT;
    if (acc < 0) acc += pT;
    return acc;
}

Int padic_exp(const Int& x, int64_t p, int T) {
    const int64_t q = (p == 2) ? 4 : p;
    if (x % q != 0) throw std::invalid_argument("padic_exp: v(x) < v(q)");
    // exact rational partial sum, then one reduction
    Rat sum = 1, term = 1;
    int vq = (p == 2) ? 2 : 1;
    int jmax = (p == 2) ? (T + 2) : (2 * T / vq + 4);
    for (int j = 1; j <= jmax; ++j) {
        term *= Rat(x, j);
        sum += term;
    }
    Int pT = ipow(Int(p), static_cast<unsigned long>(T));
    Int den = denominator(sum);
    if (den % p == 0) throw std::logic_error("padic_exp: sum not p-integral");
    Int num = numerator(sum) % pT;
    if (num < 0) num += pT;
    // modular inverse of den
    Int t0 = 0, t1 = 1, r0 = pT, r1 = den % pT;
    if (r1 < 0) r1 += pT;
    while (r1 != 0) {
        Int qq = r0 / r1;
        Int tmp = t0 - qq * t1;
        t0 = t1;
        t1 = tmp;
        tmp = r0 - qq * r1;
        r0 = r1;
        r1 = tmp;
    }
    Int inv = t0 % pT;
    if (inv < 0) inv += pT;
    return num * inv % pT;
}

Int teich_residue(int64_t p, const Int& a, int T) {
    Int pT = ipow(Int(p), static_cast<unsigned long>(T));
    if (p == 2) {
        Int r = a % 4;
        if (r < 0) r += 4;
        if (r % 2 == 0) throw std::invalid_argument("teich_residue: not a unit");
        return r == 1 ? Int(1) : pT - 1;
    }
    Int x = a % pT;
    if (x < 0) x += pT;
    if (x % p == 0) throw std::invalid_argument("teich_residue: not a unit");
    for (int i = 0; i < T; ++i) {
        // x <- x^p mod pT
        Int r = 1, b = x;
        int64_t ee = p;
        while (ee) {
            if (ee & 1) r = r * b % pT;
            b = b * b % pT;
            ee >>= 1;
        }
        x = r;
    }
    return x;
}

Elem eval_wild_char(const CycloContext& ctx, const WildChar& chi, const Elem& u) {
    for (size_t i = 1; i < u.c.size(); ++i)
        if (u.c[i]) throw std::invalid_argument("eval_wild_char: u must be a rational one-unit");
    return eval_wild_char_residue(ctx, chi, Int(u.c[0]));
}

Elem eval_wild_char_residue(const CycloContext& ctx, const WildChar& chi, const Int& u) {
    int r = wild_exponent(ctx.p, chi.cond);
    if (r > ctx.wild_level)
        throw std::invalid_argument("eval_wild_char: conductor exceeds the wild level");
    Int pr = ipow(Int(ctx.p), static_cast<unsigned long>(r));
    if (r == 0 || chi.k % pr == 0) return ctx.one();
    int vq = (ctx.p == 2) ? 2 : 1;
    int T = r + vq + 2;
    Int pT = ipow(Int(ctx.p), static_cast<unsigned long>(T));
    Int ured = u % pT;
    if (ured < 0) ured += pT;
    if ((ured - 1) % ctx.q != 0) throw std::invalid_argument("eval_wild_char: u not a one-unit");
    Int lg = padic_log_one_unit(ured, ctx.p, T);
    if (lg % ctx.q != 0) throw std::logic_error("eval_wild_char: log not divisible by q");
    Int s = (lg / ctx.q) % pr;
    if (s < 0) s += pr;
    Int expnt = (Int(chi.k) % pr) * s % pr;
    if (expnt < 0) expnt += pr;
    return ctx.zeta(r).pow(expnt);
}

}  // namespace halo
