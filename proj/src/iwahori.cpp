#include "halo/iwahori.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace halo {

namespace {

uint64_t upow(uint64_t b, int e) {
    uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

uint64_t reduce_int(const Int& v, uint64_t m) {
    Int r = v % Int(m);
    if (r < 0) r += Int(m);
    return r.convert_to<uint64_t>();
}

}  // namespace

const MonoTable& MonoTable::get(int nvars, int cap) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, MonoTable*> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(nvars, cap);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto* t = new MonoTable;
    t->nvars = nvars;
    t->cap = cap;
    // graded enumeration
    Expo cur{};
    for (int deg = 0; deg <= cap; ++deg) {
        // enumerate exponent tuples of total degree == deg
        std::vector<int> e(static_cast<size_t>(nvars), 0);
        e[0] = deg;
        while (true) {
            Expo x{};
            for (int i = 0; i < nvars; ++i) x[static_cast<size_t>(i)] = static_cast<uint8_t>(e[static_cast<size_t>(i)]);
            t->index[x] = static_cast<int>(t->expo.size());
            t->expo.push_back(x);
            t->degree.push_back(deg);
            // next composition of deg into nvars parts
            int i = nvars - 2;
            while (i >= 0 && e[static_cast<size_t>(i)] == 0) --i;
            if (i < 0) break;
            --e[static_cast<size_t>(i)];
            int rest = deg;
            for (int k = 0; k <= i; ++k) rest -= e[static_cast<size_t>(k)];
            e[static_cast<size_t>(i) + 1] = rest;
            for (int k = i + 2; k < nvars; ++k) e[static_cast<size_t>(k)] = 0;
            if (nvars == 1) break;
        }
        if (nvars == 1) continue;
    }
    (void)cur;
    const size_t m = t->expo.size();
    t->prod.assign(m, std::vector<int32_t>(m, -1));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            if (t->degree[i] + t->degree[j] > cap) continue;
            Expo s{};
            for (int v = 0; v < nvars; ++v)
                s[static_cast<size_t>(v)] =
                    static_cast<uint8_t>(t->expo[i][static_cast<size_t>(v)] + t->expo[j][static_cast<size_t>(v)]);
            t->prod[i][j] = static_cast<int32_t>(t->index.at(s));
        }
    cache[key] = t;
    return *t;
}

Series Series::zero(const MonoTable& t, const CycloContext& ctx) {
    Series s;
    s.tab = &t;
    s.c.assign(t.expo.size(), ctx.zero());
    return s;
}

Series Series::constant(const MonoTable& t, Elem v) {
    Series s = zero(t, *v.ctx);
    s.c[0] = std::move(v);
    return s;
}

Series& Series::axpy(const Elem& s, const Series& o) {
    for (size_t i = 0; i < c.size(); ++i)
        if (!o.c[i].residue_is_zero() || !s.residue_is_zero()) c[i] += s * o.c[i];
    return *this;
}

Series operator*(const Series& a, const Series& b) {
    Series r = Series::zero(*a.tab, *a.c[0].ctx);
    const auto& prod = a.tab->prod;
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].residue_is_zero()) continue;
        for (size_t j = 0; j < b.c.size(); ++j) {
            if (b.c[j].residue_is_zero()) continue;
            int32_t k = prod[i][j];
            if (k < 0) continue;
            r.c[static_cast<size_t>(k)] += a.c[i] * b.c[j];
        }
    }
    // propagate precision loss uniformly
    int lost = 0;
    for (const Elem& x : a.c) lost = std::max(lost, x.lost);
    for (const Elem& x : b.c) lost = std::max(lost, x.lost);
    for (Elem& x : r.c) x.lost = std::max(x.lost, lost);
    return r;
}

Series operator+(Series a, const Series& b) {
    for (size_t i = 0; i < a.c.size(); ++i) a.c[i] += b.c[i];
    return a;
}

Series Series::scale(const Elem& s) const {
    Series r = *this;
    for (Elem& x : r.c) x = x * s;
    return r;
}

Series Series::inverse_unit() const {
    const CycloContext& ctx = *c[0].ctx;
    ValResult v0 = valuation(c[0]);
    if (v0.val != Valuation::of(0)) throw std::invalid_argument("Series::inverse_unit: constant not a unit");
    Series x = Series::constant(*tab, c[0].inv_unit());
    Series two = Series::constant(*tab, ctx.from_int(2));
    int steps = 1;
    for (int reach = 1; reach < tab->cap + 1; reach *= 2) ++steps;
    for (int i = 0; i < steps + 1; ++i) x = x * (two + (*this * x).scale(ctx.from_int(-1)));
    return x;
}

Rat Series::min_floor(int mindeg) const {
    bool found = false;
    Rat best = 0;
    for (size_t i = 0; i < c.size(); ++i) {
        if (tab->degree[i] < mindeg) continue;
        ValResult v = valuation(c[i]);
        if (v.val.is_inf()) continue;
        if (!found || v.val.finite() < best) {
            best = v.val.finite();
            found = true;
        }
    }
    if (!found) return Rat(c.empty() ? 0 : c[0].prec_p());
    return best;
}

Elem plucker(const std::vector<std::vector<Elem>>& x, int j, const std::vector<int>& sigma) {
    if (static_cast<int>(sigma.size()) != j) throw std::invalid_argument("plucker: |sigma| != j");
    const CycloContext& ctx = *x[0][0].ctx;
    // permutation expansion; j <= 4 in this artifact
    std::vector<int> perm(static_cast<size_t>(j));
    std::iota(perm.begin(), perm.end(), 0);
    Elem acc = ctx.zero();
    do {
        int inv = 0;
        for (int a = 0; a < j; ++a)
            for (int b = a + 1; b < j; ++b)
                if (perm[static_cast<size_t>(a)] > perm[static_cast<size_t>(b)]) ++inv;
        Elem term = ctx.one();
        for (int r = 0; r < j; ++r)
            term = term * x[static_cast<size_t>(sigma[static_cast<size_t>(r)])][static_cast<size_t>(perm[static_cast<size_t>(r)])];
        acc += (inv % 2 == 0) ? term : -term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

int var_id(int n, int i, int j) {
    if (!(i > j && j >= 0 && i < n)) throw std::invalid_argument("var_id: need i > j");
    int id = 0;
    for (int col = 0; col < j; ++col) id += n - 1 - col;
    return id + (i - j - 1);
}

const std::vector<std::vector<std::vector<int>>>& subsets(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<std::vector<std::vector<int>>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::vector<std::vector<int>>> out(static_cast<size_t>(n) + 1);
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) s.push_back(i);
        out[s.size()].push_back(s);
    }
    for (auto& v : out) std::sort(v.begin(), v.end());
    return cache.emplace(n, std::move(out)).first->second;
}

const std::vector<std::vector<ZPoly>>& z_minors(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<std::vector<ZPoly>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    const auto& subs = subsets(n);
    std::vector<std::vector<ZPoly>> out;
    for (int j = 1; j < n; ++j) {
        std::vector<ZPoly> row;
        for (const std::vector<int>& tau : subs[static_cast<size_t>(j)]) {
            ZPoly poly;
            std::vector<int> perm(static_cast<size_t>(j));
            std::iota(perm.begin(), perm.end(), 0);
            do {
                int inv = 0;
                for (int a = 0; a < j; ++a)
                    for (int b = a + 1; b < j; ++b)
                        if (perm[static_cast<size_t>(a)] > perm[static_cast<size_t>(b)]) ++inv;
                Expo e{};
                int ppow = 0;
                bool zero = false;
                for (int r = 0; r < j && !zero; ++r) {
                    int row_i = tau[static_cast<size_t>(r)];
                    int col_i = perm[static_cast<size_t>(r)];
                    if (row_i == col_i) continue;  // entry 1
                    if (row_i < col_i) {
                        zero = true;
                        break;
                    }
                    ++ppow;
                    ++e[static_cast<size_t>(var_id(n, row_i, col_i))];
                }
                if (!zero) poly.terms.push_back({e, ppow, inv % 2 == 0 ? 1 : -1});
            } while (std::next_permutation(perm.begin(), perm.end()));
            row.push_back(std::move(poly));
        }
        out.push_back(std::move(row));
    }
    return cache.emplace(n, std::move(out)).first->second;
}

int BallRadii::slot_radius(int slot) const {
    int id = 0;
    for (int j = 0; j + 1 < n; ++j)
        for (int i = j + 1; i < n; ++i) {
            if (id == slot) return col[static_cast<size_t>(j)];
            ++id;
        }
    throw std::out_of_range("slot_radius");
}

size_t BallRadii::ball_count(int64_t p) const {
    size_t total = 1;
    for (int s = 0; s < nvars(); ++s) {
        size_t f = upow(static_cast<uint64_t>(p), slot_radius(s));
        if (total > (size_t(1) << 40) / std::max<size_t>(f, 1))
            throw std::domain_error("ball_count: too many balls");
        total *= f;
    }
    return total;
}

std::vector<uint64_t> BallRadii::ball_center(int64_t p, size_t id) const {
    std::vector<uint64_t> c(static_cast<size_t>(nvars()));
    for (int s = 0; s < nvars(); ++s) {
        uint64_t rad = upow(static_cast<uint64_t>(p), slot_radius(s));
        c[static_cast<size_t>(s)] = id % rad;
        id /= rad;
    }
    return c;
}

size_t BallRadii::ball_id(int64_t p, const std::vector<uint64_t>& center) const {
    size_t id = 0;
    for (int s = nvars() - 1; s >= 0; --s) {
        uint64_t rad = upow(static_cast<uint64_t>(p), slot_radius(s));
        id = id * rad + (center[static_cast<size_t>(s)] % rad);
    }
    return id;
}

TruncatedFunction TruncatedFunction::zero(const CycloContext& ctx, const WeightCharacter& w,
                                          const BallRadii& r, int cap, int64_t p) {
    TruncatedFunction f;
    f.ctx = &ctx;
    f.w = w;
    f.radii = r;
    f.cap = cap;
    const MonoTable& tab = MonoTable::get(r.nvars(), cap);
    f.balls.assign(r.ball_count(p), Series::zero(tab, ctx));
    return f;
}

TruncatedFunction TruncatedFunction::basis(const CycloContext& ctx, const WeightCharacter& w,
                                           const BallRadii& r, int cap, int64_t p, size_t ball,
                                           int mono) {
    TruncatedFunction f = zero(ctx, w, r, cap, p);
    f.balls[ball].c[static_cast<size_t>(mono)] = ctx.one();
    return f;
}

Elem TruncatedFunction::eval(const std::vector<Int>& z) const {
    const int64_t p = ctx->p;
    std::vector<uint64_t> center(static_cast<size_t>(radii.nvars()));
    std::vector<Elem> wv;
    for (int s = 0; s < radii.nvars(); ++s) {
        uint64_t rad = upow(static_cast<uint64_t>(p), radii.slot_radius(s));
        Int zr = z[static_cast<size_t>(s)] % Int(rad);
        if (zr < 0) zr += Int(rad);
        center[static_cast<size_t>(s)] = zr.convert_to<uint64_t>();
        Int num = z[static_cast<size_t>(s)] - zr;
        wv.push_back(ctx->from_int(num / Int(rad)));
    }
    const Series& ser = balls[radii.ball_id(p, center)];
    Elem acc = ctx->zero();
    for (size_t i = 0; i < ser.c.size(); ++i) {
        if (ser.c[i].residue_is_zero()) continue;
        Elem term = ser.c[i];
        for (int v = 0; v < radii.nvars(); ++v)
            for (int k = 0; k < ser.tab->expo[i][static_cast<size_t>(v)]; ++k)
                term = term * wv[static_cast<size_t>(v)];
        acc += term;
    }
    return acc;
}

TruncatedFunction BlockOp::apply(const TruncatedFunction& f) const {
    TruncatedFunction out = TruncatedFunction::zero(*f.ctx, f.w, f.radii, f.cap, p);
    const size_t nm = tab->expo.size();
    Valuation tail = f.tail_floor;
    for (size_t b = 0; b < out.balls.size(); ++b) {
        int ib = in_ball[b];
        if (ib < 0) continue;
        const Series& in = f.balls[static_cast<size_t>(ib)];
        Series& dst = out.balls[b];
        const std::vector<Elem>& M = mat[b];
        for (size_t j = 0; j < nm; ++j) {
            if (in.c[j].residue_is_zero()) continue;
            ValResult vc = valuation(in.c[j]);
            tail = min(tail, Valuation::of(col_drop_floor[j]) + vc.val);
            for (size_t i = 0; i < nm; ++i) {
                const Elem& mij = M[i * nm + j];
                if (mij.residue_is_zero()) continue;
                dst.c[i] += mij * in.c[j];
            }
        }
    }
    out.tail_floor = tail;
    return out;
}

BlockOp compose(const BlockOp& a, const BlockOp& b) {
    BlockOp c;
    c.tab = a.tab;
    c.p = a.p;
    const size_t nm = a.tab->expo.size();
    const size_t nb = a.in_ball.size();
    c.in_ball.assign(nb, -1);
    c.mat.assign(nb, {});
    Rat a_min = a.col_drop_floor.empty() ? Rat(0) : a.col_drop_floor[0];
    for (const Rat& v : a.col_drop_floor) a_min = std::min(a_min, v);
    c.col_drop_floor.resize(nm);
    for (size_t j = 0; j < nm; ++j)
        c.col_drop_floor[j] = std::min(b.col_drop_floor[j], a_min);
    for (size_t o = 0; o < nb; ++o) {
        int m = a.in_ball[o];
        if (m < 0) continue;
        int i = b.in_ball[static_cast<size_t>(m)];
        if (i < 0) continue;
        c.in_ball[o] = i;
        const std::vector<Elem>& A = a.mat[o];
        const std::vector<Elem>& B = b.mat[static_cast<size_t>(m)];
        std::vector<Elem> M(nm * nm, A[0].ctx->zero());
        for (size_t r = 0; r < nm; ++r)
            for (size_t k = 0; k < nm; ++k) {
                const Elem& av = A[r * nm + k];
                if (av.residue_is_zero()) continue;
                for (size_t col = 0; col < nm; ++col) {
                    const Elem& bv = B[k * nm + col];
                    if (bv.residue_is_zero()) continue;
                    M[r * nm + col] += av * bv;
                }
            }
        c.mat[o] = std::move(M);
    }
    return c;
}

namespace {

// minor of a residue matrix: rows `rows`, columns `cols`
uint64_t det_minor(const ModMat& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    const int j = static_cast<int>(rows.size());
    std::vector<int> perm(static_cast<size_t>(j));
    std::iota(perm.begin(), perm.end(), 0);
    uint64_t acc = 0;
    bool any = false;
    do {
        int inv = 0;
        for (int a = 0; a < j; ++a)
            for (int b = a + 1; b < j; ++b)
                if (perm[static_cast<size_t>(a)] > perm[static_cast<size_t>(b)]) ++inv;
        uint64_t term = 1;
        for (int r = 0; r < j; ++r)
            term = kern::mulmod(term,
                                m(rows[static_cast<size_t>(r)], cols[static_cast<size_t>(perm[static_cast<size_t>(r)])]),
                                m.m);
        acc = (inv % 2 == 0) ? kern::addmod(acc, term, m.m) : kern::submod(acc, term, m.m);
        any = true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    (void)any;
    return acc;
}

// substitute z_s = center_s + p^{c_s} w_s into a symbolic minor
Series substitute(const ZPoly& poly, const MonoTable& tab, const CycloContext& ctx,
                  const BallRadii& radii, const std::vector<uint64_t>& center) {
    Series out = Series::zero(tab, ctx);
    const uint64_t m = ctx.pM;
    const int64_t p = ctx.p;
    for (const ZTerm& t : poly.terms) {
        uint64_t base = upow(static_cast<uint64_t>(p), t.ppow) % m;
        if (t.sgn < 0) base = base ? m - base : 0;
        // expand the product over slots with e_s > 0
        std::vector<int> slots;
        for (int s = 0; s < radii.nvars(); ++s)
            if (t.e[static_cast<size_t>(s)]) slots.push_back(s);
        std::vector<int> k(slots.size(), 0);
        while (true) {
            uint64_t coef = base;
            Expo mono{};
            for (size_t si = 0; si < slots.size(); ++si) {
                int s = slots[si];
                int es = t.e[static_cast<size_t>(s)];
                int ks = k[si];
                mono[static_cast<size_t>(s)] = static_cast<uint8_t>(ks);
                Int bc = binom(Int(es), ks);
                coef = kern::mulmod(coef, reduce_int(bc, m), m);
                uint64_t cpow = kern::powmod(center[static_cast<size_t>(s)] % m,
                                             static_cast<uint64_t>(es - ks), m);
                coef = kern::mulmod(coef, cpow, m);
                coef = kern::mulmod(
                    coef, kern::powmod(upow(static_cast<uint64_t>(p), radii.slot_radius(s)) % m,
                                       static_cast<uint64_t>(ks), m),
                    m);
            }
            int idx = tab.find(mono);
            if (idx >= 0 && coef) {
                Elem add = ctx.from_residue(coef);
                out.c[static_cast<size_t>(idx)] += add;
            }
            // odometer
            size_t pos = 0;
            for (; pos < slots.size(); ++pos) {
                if (++k[pos] <= t.e[static_cast<size_t>(slots[pos])]) break;
                k[pos] = 0;
            }
            if (pos == slots.size()) break;
        }
    }
    return out;
}

// chi_j applied to a unit residue u0 (tame and wild parts)
Elem chi_value(const CycloContext& ctx, const WeightCharacter& w, int j, uint64_t u0) {
    Elem val = ctx.one();
    if (w.tame_nontrivial(j)) {
        int64_t a = static_cast<int64_t>(u0 % static_cast<uint64_t>(ctx.q));
        val = val * ctx.teichmuller(a).pow(Int(w.tame[static_cast<size_t>(j)]));
    }
    const WildChar& chi = w.wild[static_cast<size_t>(j)];
    if (wild_exponent(ctx.p, chi.cond) > 0) {
        Elem om = ctx.teichmuller(static_cast<int64_t>(u0 % static_cast<uint64_t>(ctx.q)));
        uint64_t ou = kern::mulmod(u0, kern::invmod(om.c[0], ctx.pM), ctx.pM);
        val = val * eval_wild_char_residue(ctx, chi, Int(ou));
    }
    return val;
}

// weight factor s_j(rho) for a series rho = rho0 (1 + x) with x small
Series weight_factor(const CycloContext& ctx, const WeightCharacter& w, int j, const Series& rho) {
    const MonoTable& tab = *rho.tab;
    Elem rho0 = rho.c[0];
    ValResult v0 = valuation(rho0);
    if (v0.val != Valuation::of(0)) throw std::domain_error("weight_factor: diagonal ratio not a unit");
    Elem inv0 = rho0.inv_unit();
    Series x = rho.scale(inv0);
    x.c[0] -= ctx.one();
    // the variation must sit inside the character kernel and the one-units;
    // a fully trivial chi_j only needs convergence of the binomial series
    int vq = (ctx.p == 2) ? 2 : 1;
    bool chi_trivial = !w.tame_nontrivial(j) && wild_exponent(ctx.p, w.conductor(j)) == 0;
    int needed = chi_trivial ? 1 : std::max(w.conductor(j), vq);
    Rat xf = x.min_floor(0);
    if (xf < Rat(needed))
        throw std::domain_error("weight_factor: ball variation exceeds the character kernel");
    // (1 + x)^{t_j} by the binomial series; x has positive valuation so the sum
    // truncates at the working precision
    const Int& tj = w.t[static_cast<size_t>(j)];
    Series acc = Series::constant(tab, ctx.one());
    Series xk = Series::constant(tab, ctx.one());
    int kmax = std::min(tab.cap, ctx.coeff_prec / std::max(needed, 1) + 1);
    Int bc = 1;
    for (int k = 1; k <= kmax; ++k) {
        xk = xk * x;
        bc = bc * (tj - (k - 1)) / k;  // binom(t_j, k), exact
        acc = acc + xk.scale(ctx.from_int(bc));
    }
    Elem head = chi_value(ctx, w, j, rho0.c[0]) * rho0.pow((tj < 0) ? Int(0) : tj);
    if (tj < 0) head = head * rho0.inv_unit().pow(-tj);
    return acc.scale(head);
}

}  // namespace

BlockOp act_op(const CycloContext& ctx, const WeightCharacter& w, const BallRadii& r, int cap,
               const std::vector<std::vector<Int>>& u) {
    const int n = w.n;
    const int64_t p = ctx.p;
    const uint64_t m = ctx.pM;
    const MonoTable& tab = MonoTable::get(r.nvars(), cap);
    const auto& subs = subsets(n);
    const auto& zmin = z_minors(n);

    // validate the Iwahori shape and reduce
    ModMat ur(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Int v = u[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (i > j && v % p != 0) throw std::invalid_argument("act: matrix not Iwahori (lower entry)");
            if (i == j && v % p == 0) throw std::invalid_argument("act: matrix not Iwahori (diagonal)");
            ur(i, j) = reduce_int(v, m);
        }
    ModMat uinv = ur.inverse(static_cast<uint64_t>(p));

    // wedge coefficients a_{j, sigma, tau}(u^{-1}) for sigma = {0..j-2, i-1}
    // rows and all tau; plus det(u^{-1}) for the last torus entry
    std::vector<std::vector<std::vector<uint64_t>>> wedge(static_cast<size_t>(n));  // [j][i-j][tau]
    for (int j = 1; j < n; ++j) {
        const auto& taus = subs[static_cast<size_t>(j)];
        std::vector<std::vector<uint64_t>> rows;
        for (int i = j; i <= n; ++i) {
            // sigma: first j-1 rows plus row i-1 (i == j gives 1_j)
            std::vector<int> sigma;
            for (int t = 0; t < j - 1; ++t) sigma.push_back(t);
            sigma.push_back(i - 1);
            std::sort(sigma.begin(), sigma.end());
            std::vector<uint64_t> coefs;
            for (const auto& tau : taus) coefs.push_back(det_minor(uinv, sigma, tau));
            rows.push_back(std::move(coefs));
        }
        wedge[static_cast<size_t>(j)] = std::move(rows);
    }
    std::vector<int> all(static_cast<size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    uint64_t det_uinv = det_minor(uinv, all, all);

    const size_t nballs = r.ball_count(p);
    const size_t nm = tab.expo.size();
    BlockOp op;
    op.tab = &tab;
    op.p = p;
    op.in_ball.assign(nballs, -1);
    op.mat.assign(nballs, {});
    int min_col = r.n >= 2 ? *std::min_element(r.col.begin(), r.col.end()) : 0;
    Rat decay = Rat(1 + min_col);
    op.col_drop_floor.resize(nm);
    for (size_t j = 0; j < nm; ++j) op.col_drop_floor[j] = Rat(cap + 1 - tab.degree[j]) * decay;

    for (size_t b = 0; b < nballs; ++b) {
        std::vector<uint64_t> center = r.ball_center(p, b);
        // T_j series and numerators
        std::vector<Series> T(static_cast<size_t>(n) + 1, Series::constant(tab, ctx.one()));
        std::vector<Series> Tinv(static_cast<size_t>(n) + 1, Series::constant(tab, ctx.one()));
        for (int j = 1; j < n; ++j) {
            const auto& taus = subs[static_cast<size_t>(j)];
            Series tj = Series::zero(tab, ctx);
            for (size_t ti = 0; ti < taus.size(); ++ti) {
                uint64_t a = wedge[static_cast<size_t>(j)][0][ti];
                if (!a) continue;
                Series zs = substitute(zmin[static_cast<size_t>(j) - 1][ti], tab, ctx, r, center);
                tj.axpy(ctx.from_residue(a), zs);
            }
            T[static_cast<size_t>(j)] = tj;
            Tinv[static_cast<size_t>(j)] = tj.inverse_unit();
        }
        T[static_cast<size_t>(n)] = Series::constant(tab, ctx.from_residue(det_uinv));

        // weight factor
        Series S = Series::constant(tab, ctx.one());
        for (int j = 1; j <= n; ++j) {
            Series rho = T[static_cast<size_t>(j)] * Tinv[static_cast<size_t>(j) - 1];
            S = S * weight_factor(ctx, w, j - 1, rho);
        }

        // image-ball center and recentered coordinate series
        std::vector<uint64_t> in_center(static_cast<size_t>(r.nvars()));
        std::vector<Series> wprime(static_cast<size_t>(r.nvars()), Series::zero(tab, ctx));
        for (int j = 1; j < n; ++j) {
            const auto& taus = subs[static_cast<size_t>(j)];
            for (int i = j + 1; i <= n; ++i) {
                Series num = Series::zero(tab, ctx);
                for (size_t ti = 0; ti < taus.size(); ++ti) {
                    uint64_t a = wedge[static_cast<size_t>(j)][static_cast<size_t>(i - j)][ti];
                    if (!a) continue;
                    Series zs = substitute(zmin[static_cast<size_t>(j) - 1][ti], tab, ctx, r, center);
                    num.axpy(ctx.from_residue(a), zs);
                }
                // p (uz)_{ij} at the center
                uint64_t t0inv = Tinv[static_cast<size_t>(j)].c[0].c[0];
                uint64_t p_uz0 = kern::mulmod(num.c[0].c[0], t0inv, m);
                if (p_uz0 % static_cast<uint64_t>(p) != 0)
                    throw std::logic_error("act: image coordinate not integral");
                uint64_t uz0 = p_uz0 / static_cast<uint64_t>(p);
                int slot = var_id(n, i - 1, j - 1);
                int crad = r.slot_radius(slot);
                uint64_t prad = upow(static_cast<uint64_t>(p), crad);
                in_center[static_cast<size_t>(slot)] = uz0 % prad;
                // w' = (num - p a' T_j) / (p^{1+c} T_j)
                Series shifted = num;
                uint64_t pa = kern::mulmod(static_cast<uint64_t>(p) % m, in_center[static_cast<size_t>(slot)] % m, m);
                shifted.axpy(ctx.from_residue(pa ? m - pa : 0), T[static_cast<size_t>(j)]);
                Series quot = shifted * Tinv[static_cast<size_t>(j)];
                for (Elem& cc : quot.c) cc = cc.div_exact_p(1 + crad);
                wprime[static_cast<size_t>(slot)] = std::move(quot);
            }
        }
        op.in_ball[b] = static_cast<int>(r.ball_id(p, in_center));

        // columns: S * prod_s w'_s^{e_s}, built by graded recursion
        std::vector<Series> power(nm, Series::zero(tab, ctx));
        power[0] = Series::constant(tab, ctx.one());
        std::vector<Elem> M(nm * nm, ctx.zero());
        for (size_t mi = 0; mi < nm; ++mi) {
            if (mi > 0) {
                Expo e = tab.expo[mi];
                int s = 0;
                while (!e[static_cast<size_t>(s)]) ++s;
                --e[static_cast<size_t>(s)];
                int prev = tab.find(e);
                power[mi] = power[static_cast<size_t>(prev)] * wprime[static_cast<size_t>(s)];
            }
            Series col = S * power[mi];
            for (size_t ri = 0; ri < nm; ++ri) M[ri * nm + mi] = col.c[ri];
        }
        op.mat[b] = std::move(M);
    }
    return op;
}

BlockOp scale_op(const CycloContext& ctx, const WeightCharacter& w, const BallRadii& r, int cap,
                 const std::vector<Int>& a) {
    const int n = w.n;
    const int64_t p = ctx.p;
    const MonoTable& tab = MonoTable::get(r.nvars(), cap);
    for (int i = 0; i + 1 < n; ++i)
        if (a[static_cast<size_t>(i)] < a[static_cast<size_t>(i) + 1])
            throw std::invalid_argument("scale_op: a must be nonincreasing");

    const size_t nballs = r.ball_count(p);
    const size_t nm = tab.expo.size();
    BlockOp op;
    op.tab = &tab;
    op.p = p;
    op.in_ball.assign(nballs, -1);
    op.mat.assign(nballs, {});
    op.col_drop_floor.assign(nm, Rat(ctx.coeff_prec + cap + 1));  // degree never increases

    // per-slot contraction exponents delta_s = a_j - a_i for slot (i, j)
    std::vector<int> delta(static_cast<size_t>(r.nvars()));
    for (int j = 0; j + 1 < n; ++j)
        for (int i = j + 1; i < n; ++i) {
            Int d = a[static_cast<size_t>(j)] - a[static_cast<size_t>(i)];
            if (d > 40) throw std::invalid_argument("scale_op: exponent gap beyond budget");
            delta[static_cast<size_t>(var_id(n, i, j))] = d.convert_to<int>();
        }

    for (size_t b = 0; b < nballs; ++b) {
        std::vector<uint64_t> out_center = r.ball_center(p, b);
        std::vector<uint64_t> in_center(out_center.size());
        std::vector<uint64_t> offset(out_center.size());
        std::vector<int> dd(out_center.size());
        for (int s = 0; s < r.nvars(); ++s) {
            uint64_t prad = upow(static_cast<uint64_t>(p), r.slot_radius(s));
            // p^delta * (a2 + p^c w) = (p^delta a2 mod p^c) + p^c (off + p^delta w)
            unsigned __int128 scaled =
                static_cast<unsigned __int128>(upow(static_cast<uint64_t>(p), delta[static_cast<size_t>(s)])) *
                out_center[static_cast<size_t>(s)];
            in_center[static_cast<size_t>(s)] = static_cast<uint64_t>(scaled % prad);
            offset[static_cast<size_t>(s)] = static_cast<uint64_t>(scaled / prad);
            dd[static_cast<size_t>(s)] = delta[static_cast<size_t>(s)];
        }
        op.in_ball[b] = static_cast<int>(r.ball_id(p, in_center));
        // column e: prod_s (off_s + p^{delta_s} w_s)^{e_s}
        std::vector<Elem> M(nm * nm, ctx.zero());
        for (size_t mi = 0; mi < nm; ++mi) {
            const Expo& e = tab.expo[mi];
            // expand binomially; rows have componentwise k <= e
            std::vector<int> slots;
            for (int s = 0; s < r.nvars(); ++s)
                if (e[static_cast<size_t>(s)]) slots.push_back(s);
            std::vector<int> k(slots.size(), 0);
            while (true) {
                uint64_t coef = 1 % ctx.pM;
                Expo mono{};
                for (size_t si = 0; si < slots.size(); ++si) {
                    int s = slots[si];
                    int es = e[static_cast<size_t>(s)];
                    int ks = k[si];
                    mono[static_cast<size_t>(s)] = static_cast<uint8_t>(ks);
                    coef = kern::mulmod(coef, reduce_int(binom(Int(es), ks), ctx.pM), ctx.pM);
                    coef = kern::mulmod(coef,
                                        kern::powmod(offset[static_cast<size_t>(s)] % ctx.pM,
                                                     static_cast<uint64_t>(es - ks), ctx.pM),
                                        ctx.pM);
                    coef = kern::mulmod(
                        coef,
                        kern::powmod(kern::powmod(static_cast<uint64_t>(p), static_cast<uint64_t>(dd[static_cast<size_t>(s)]), ctx.pM),
                                     static_cast<uint64_t>(ks), ctx.pM),
                        ctx.pM);
                }
                int idx = tab.find(mono);
                if (idx >= 0 && coef) M[static_cast<size_t>(idx) * nm + mi] += ctx.from_residue(coef);
                size_t pos = 0;
                for (; pos < slots.size(); ++pos) {
                    if (++k[pos] <= e[static_cast<size_t>(slots[pos])]) break;
                    k[pos] = 0;
                }
                if (pos == slots.size()) break;
            }
        }
        op.mat[b] = std::move(M);
    }
    return op;
}

TruncatedFunction act(const CycloContext& ctx, const std::vector<std::vector<Int>>& u,
                      const TruncatedFunction& f) {
    BlockOp op = act_op(ctx, f.w, f.radii, f.cap, u);
    return op.apply(f);
}

Int scale_exponents(const std::vector<Int>& a, const std::vector<int>& e) {
    const int n = static_cast<int>(a.size());
    for (int i = 0; i + 1 < n; ++i)
        if (a[static_cast<size_t>(i)] < a[static_cast<size_t>(i) + 1])
            throw std::invalid_argument("scale_exponents: negative exponent (a not in Sigma^-)");
    Int total = 0;
    for (int j = 0; j + 1 < n; ++j)
        for (int i = j + 1; i < n; ++i) {
            int slot = var_id(n, i, j);
            if (slot < static_cast<int>(e.size()))
                total += (a[static_cast<size_t>(j)] - a[static_cast<size_t>(i)]) * e[static_cast<size_t>(slot)];
        }
    return total;
}

}  // namespace halo
