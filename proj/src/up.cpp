#include "halo/up.hpp"

#include "halo/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace halo {

namespace {

uint64_t upow(uint64_t b, int e) {
    uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

GlobalData GlobalData::trivial(int h) {
    GlobalData g;
    g.h = h;
    return g;
}

void GlobalData::validate(int n, int64_t p) const {
    if (h < 1) throw std::invalid_argument("GlobalData: h >= 1");
    for (const auto& [key, entry] : gluing) {
        if (key.first < 0 || key.second < 0 || key.second >= h)
            throw std::invalid_argument("GlobalData: bad gluing key");
        if (entry.target < 0 || entry.target >= h)
            throw std::invalid_argument("GlobalData: gluing target out of range");
        if (!entry.twist.empty()) {
            if (static_cast<int>(entry.twist.size()) != n)
                throw std::invalid_argument("GlobalData: twist size != n");
            for (int i = 0; i < n; ++i) {
                if (static_cast<int>(entry.twist[static_cast<size_t>(i)].size()) != n)
                    throw std::invalid_argument("GlobalData: twist not square");
                for (int j = 0; j < n; ++j) {
                    const Int& v = entry.twist[static_cast<size_t>(i)][static_cast<size_t>(j)];
                    if (i > j && v % p != 0)
                        throw std::invalid_argument("GlobalData: twist not Iwahori");
                    if (i == j && v % p == 0)
                        throw std::invalid_argument("GlobalData: twist diagonal not a unit");
                }
            }
        }
    }
}

Int coset_count(int n, int64_t p, const std::vector<Int>& a) {
    Int total = 1;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            total *= ipow(Int(p), (a[static_cast<size_t>(i)] - a[static_cast<size_t>(j)]).convert_to<unsigned long>());
    return total;
}

std::vector<std::vector<std::vector<Int>>> coset_reps(int n, int64_t p, const std::vector<Int>& a) {
    for (int i = 0; i + 1 < n; ++i)
        if (a[static_cast<size_t>(i)] < a[static_cast<size_t>(i) + 1])
            throw std::invalid_argument("coset_reps: a must be nonincreasing");
    Int count = coset_count(n, p, a);
    if (count > 100000) throw std::domain_error("coset_reps: beyond enumeration budget");

    // odometer over the upper entries y_ij mod p^{a_i - a_j}
    struct Slot {
        int i, j;
        Int radix;
    };
    std::vector<Slot> slots;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i)
            slots.push_back({i, j, ipow(Int(p), (a[static_cast<size_t>(i)] - a[static_cast<size_t>(j)]).convert_to<unsigned long>())});

    std::vector<std::vector<std::vector<Int>>> reps;
    std::vector<Int> y(slots.size(), 0);
    while (true) {
        std::vector<std::vector<Int>> m(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(n), 0));
        for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(i)] = ipow(Int(p), a[static_cast<size_t>(i)].convert_to<unsigned long>());
        // N(y) u^a has (i, j) entry y_ij p^{a_j} above the diagonal
        for (size_t s = 0; s < slots.size(); ++s)
            m[static_cast<size_t>(slots[s].i)][static_cast<size_t>(slots[s].j)] =
                y[s] * ipow(Int(p), a[static_cast<size_t>(slots[s].j)].convert_to<unsigned long>());
        reps.push_back(std::move(m));
        size_t pos = 0;
        for (; pos < slots.size(); ++pos) {
            if (++y[pos] < slots[pos].radix) break;
            y[pos] = 0;
        }
        if (pos == slots.size()) break;
    }
    if (Int(static_cast<long>(reps.size())) != count) throw std::logic_error("coset_reps: count mismatch");
    return reps;
}

size_t UpMatrix::index_of(int comp, size_t ball, int mono) const {
    const size_t nm = MonoTable::get(radii.nvars(), cap).expo.size();
    const size_t balls = radii.ball_count(ctx->p);
    return (static_cast<size_t>(comp) * balls + ball) * nm + static_cast<size_t>(mono);
}

UpBasisLabel UpMatrix::label(size_t idx) const {
    const size_t nm = MonoTable::get(radii.nvars(), cap).expo.size();
    const size_t balls = radii.ball_count(ctx->p);
    UpBasisLabel l;
    l.mono = static_cast<int>(idx % nm);
    idx /= nm;
    l.ball = idx % balls;
    l.component = static_cast<int>(idx / balls);
    return l;
}

Elem UpMatrix::entry(size_t row, size_t col) const {
    Elem x = ctx->zero();
    x.known_zero = false;
    x.exact = false;
    x.lost = lost;
    for (size_t s = 0; s < plane.size(); ++s) x.c[s] = plane[s][row * dim + col];
    bool z = true;
    for (uint64_t v : x.c)
        if (v) z = false;
    (void)z;
    return x;
}

bool UpMatrix::is_identity() const {
    for (size_t r = 0; r < dim; ++r)
        for (size_t c = 0; c < dim; ++c) {
            uint64_t want0 = (r == c) ? 1 : 0;
            if (plane[0][r * dim + c] != want0) return false;
            for (size_t s = 1; s < plane.size(); ++s)
                if (plane[s][r * dim + c] != 0) return false;
        }
    return true;
}

bool UpMatrix::is_diagonal() const {
    for (size_t r = 0; r < dim; ++r)
        for (size_t c = 0; c < dim; ++c) {
            if (r == c) continue;
            for (size_t s = 0; s < plane.size(); ++s)
                if (plane[s][r * dim + c] != 0) return false;
        }
    return true;
}

namespace {

BallRadii choose_radii(const WeightCharacter& w, int64_t p) {
    BallRadii r;
    r.n = w.n;
    bool poly_ok = true;
    for (int i = 0; i < w.n; ++i) {
        if (wild_exponent(p, w.conductor(i)) > 0) poly_ok = false;
        if (p == 2 && w.tame_nontrivial(i)) poly_ok = false;
    }
    if (poly_ok) {
        r.col.assign(static_cast<size_t>(w.n) - 1, 0);
        return r;
    }
    r.col = minimal_radius_columns(w);
    return r;
}

struct TermOp {
    int out_component;
    int in_component;
    const BlockOp* op;
};

// accumulate (out-ball, out-mono, in-mono) blocks into the planes
void scatter_block(UpMatrix& M, const BlockOp& op, int out_comp, int in_comp) {
    const size_t nm = op.tab->expo.size();
    const size_t balls = op.in_ball.size();
    int maxlost = 0;
    for (size_t b = 0; b < balls; ++b) {
        int ib = op.in_ball[b];
        if (ib < 0) continue;
        const std::vector<Elem>& blk = op.mat[b];
        for (size_t r = 0; r < nm; ++r)
            for (size_t c = 0; c < nm; ++c) {
                const Elem& v = blk[r * nm + c];
                if (v.residue_is_zero() && v.lost == 0) continue;
                size_t row = M.index_of(out_comp, b, static_cast<int>(r));
                size_t col = M.index_of(in_comp, static_cast<size_t>(ib), static_cast<int>(c));
                for (size_t s = 0; s < M.plane.size(); ++s)
                    M.plane[s][row * M.dim + col] =
                        kern::addmod(M.plane[s][row * M.dim + col], v.c[s], M.ctx->pM);
                maxlost = std::max(maxlost, v.lost);
            }
    }
    M.lost = std::max(M.lost, maxlost);
}

}  // namespace

UpMatrix assemble_up(const CycloContext& ctx, const WeightCharacter& w, const GlobalData& g,
                     const std::vector<Int>& a, int cap) {
    return assemble_up(ctx, w, g, a, cap, choose_radii(w, ctx.p));
}

UpMatrix assemble_up(const CycloContext& ctx, const WeightCharacter& w, const GlobalData& g,
                     const std::vector<Int>& a, int cap, const BallRadii& radii) {
    w.validate();
    g.validate(w.n, ctx.p);
    const int n = w.n;
    const int64_t p = ctx.p;
    if (static_cast<int>(a.size()) != n) throw std::invalid_argument("assemble_up: |a| != n");

    // shape gate for genuine-ball radii
    bool has_balls = false;
    for (int v : radii.col)
        if (v > 0) has_balls = true;
    if (has_balls) {
        std::map<std::pair<int, int>, int> half;
        for (int j = 0; j + 1 < n; ++j)
            for (int i = j + 1; i < n; ++i) half[{i, j}] = radii.col[static_cast<size_t>(j)];
        std::vector<int> conds;
        for (int i = 0; i < n; ++i) conds.push_back(w.conductor(i));
        ShapeReport rep = shape_predicates(half, n, conds);
        if (!rep.analytic_shaped || !rep.compatible)
            throw std::invalid_argument("assemble_up: radii fail the shape predicates");
    }

    const MonoTable& tab = MonoTable::get(radii.nvars(), cap);
    const size_t nm = tab.expo.size();
    const size_t balls = radii.ball_count(p);

    UpMatrix M;
    M.ctx = &ctx;
    M.w = w;
    M.radii = radii;
    M.cap = cap;
    M.h = g.h;
    M.a = a;
    M.dim = static_cast<size_t>(g.h) * balls * nm;
    M.plane.assign(static_cast<size_t>(ctx.e), std::vector<uint64_t>(M.dim * M.dim, 0));

    auto reps = coset_reps(n, p, a);
    BlockOp scale = scale_op(ctx, w, radii, cap, a);

    // cache unipotent-part operators (per rep) and twist operators (per matrix)
    std::vector<BlockOp> nops;
    nops.reserve(reps.size());
    for (const auto& rep : reps) {
        // strip the diagonal: N(y) = rep * u^{-a}
        std::vector<std::vector<Int>> ny(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(n), 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Int pa = ipow(Int(p), a[static_cast<size_t>(j)].convert_to<unsigned long>());
                ny[static_cast<size_t>(i)][static_cast<size_t>(j)] = rep[static_cast<size_t>(i)][static_cast<size_t>(j)] / pa;
            }
        nops.push_back(act_op(ctx, w, radii, cap, ny));
    }

    for (int comp = 0; comp < g.h; ++comp) {
        for (size_t ri = 0; ri < reps.size(); ++ri) {
            int target = comp;
            const GluingEntry* entry = nullptr;
            auto it = g.gluing.find({static_cast<int>(ri), comp});
            if (it != g.gluing.end()) {
                entry = &it->second;
                target = entry->target;
            }
            BlockOp term;
            if (entry && !entry->twist.empty()) {
                // operator of zeta * twist^{-1}: translate by twist^{-1}, scale, translate by N(y)
                ModMat tw(n, ctx.pM);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        Int v = entry->twist[static_cast<size_t>(i)][static_cast<size_t>(j)] % Int(ctx.pM);
                        if (v < 0) v += Int(ctx.pM);
                        tw(i, j) = v.convert_to<uint64_t>();
                    }
                ModMat twinv = tw.inverse(static_cast<uint64_t>(p));
                std::vector<std::vector<Int>> twinv_i(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(n), 0));
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) twinv_i[static_cast<size_t>(i)][static_cast<size_t>(j)] = Int(twinv(i, j));
                term = compose(nops[ri], compose(scale, act_op(ctx, w, radii, cap, twinv_i)));
            } else {
                term = compose(nops[ri], scale);
            }
            scatter_block(M, term, comp, target);
        }
    }

    // per-slot structural gaps min(delta_s, 1 + c_s)
    std::vector<Rat> slot_gap(static_cast<size_t>(radii.nvars()));
    Rat min_gap(-1);
    for (int j = 0; j + 1 < n; ++j)
        for (int i = j + 1; i < n; ++i) {
            int s = var_id(n, i, j);
            Rat delta(a[static_cast<size_t>(j)] - a[static_cast<size_t>(i)]);
            Rat gamma(1 + radii.slot_radius(s));
            slot_gap[static_cast<size_t>(s)] = std::min(delta, gamma);
            if (min_gap < 0 || slot_gap[static_cast<size_t>(s)] < min_gap)
                min_gap = slot_gap[static_cast<size_t>(s)];
        }
    M.excluded_row_floor = Rat(cap + 1) * min_gap;

    // certified row floors: the structural degree floor is the one valid for
    // unseen columns too, so it is what certification may use; the observed
    // entries must sit above it or the path analysis is wrong
    const MonoTable& mt = tab;
    M.row_floor.assign(M.dim, Valuation::inf());
    for (size_t r = 0; r < M.dim; ++r) {
        UpBasisLabel l = M.label(r);
        Rat sigma = 0;
        for (int s = 0; s < radii.nvars(); ++s)
            sigma += slot_gap[static_cast<size_t>(s)] * mt.expo[static_cast<size_t>(l.mono)][static_cast<size_t>(s)];
        Valuation f = Valuation::of(sigma);
        for (size_t c = 0; c < M.dim; ++c) {
            Elem x = M.entry(r, c);
            if (x.residue_is_zero()) continue;
            ValResult vv = valuation(x);
            if (!vv.is_floor && vv.val < f)
                throw std::logic_error("assemble_up: observed entry below the structural row floor");
        }
        M.row_floor[r] = f;
    }
    return M;
}

UpMatrix assemble_scaling(const CycloContext& ctx, const WeightCharacter& w,
                          const std::vector<Int>& a, int cap, const BallRadii& radii) {
    w.validate();
    UpMatrix M;
    M.ctx = &ctx;
    M.w = w;
    M.radii = radii;
    M.cap = cap;
    M.h = 1;
    M.a = a;
    const MonoTable& tab = MonoTable::get(radii.nvars(), cap);
    const size_t nm = tab.expo.size();
    const size_t balls = radii.ball_count(ctx.p);
    M.dim = balls * nm;
    M.plane.assign(static_cast<size_t>(ctx.e), std::vector<uint64_t>(M.dim * M.dim, 0));
    BlockOp op = scale_op(ctx, w, radii, cap, a);
    scatter_block(M, op, 0, 0);
    M.row_floor.assign(M.dim, Valuation::of(0));
    M.excluded_row_floor = 0;
    return M;
}

unsigned worker_count() {
    if (const char* e = std::getenv("HALO_THREADS")) {
        long v = std::strtol(e, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

namespace {

// C = A * B on plane representation; deferred accumulation with modulus-aware
// reduction cadence, parallel over row blocks
void plane_matmul(const CycloContext& ctx, const std::vector<std::vector<uint64_t>>& A,
                  const std::vector<std::vector<uint64_t>>& B, std::vector<std::vector<uint64_t>>& C,
                  size_t dim) {
    const int e = static_cast<int>(A.size());
    const uint64_t m = ctx.pM;
    const int nacc = 2 * e - 1;
    C.assign(static_cast<size_t>(e), std::vector<uint64_t>(dim * dim, 0));

    const bool small = m < (uint64_t(1) << 28);
    const kern::Kernels& K = kern::kernels_for(m);
    // products fit budget-many deferred adds per lane
    size_t budget = kern::deferred_budget(m);

    auto do_rows = [&](size_t r0, size_t r1) {
        std::vector<std::vector<uint64_t>> acc(static_cast<size_t>(nacc), std::vector<uint64_t>(dim, 0));
        std::vector<unsigned __int128> acc128;
        if (!small) acc128.assign(static_cast<size_t>(nacc) * dim, 0);
        for (size_t i = r0; i < r1; ++i) {
            if (small) {
                for (auto& v : acc) std::fill(v.begin(), v.end(), 0);
                size_t used = 0;
                for (size_t k = 0; k < dim; ++k) {
                    bool nz = false;
                    for (int t = 0; t < e; ++t)
                        if (A[static_cast<size_t>(t)][i * dim + k]) nz = true;
                    if (!nz) continue;
                    for (int t = 0; t < e; ++t) {
                        uint64_t av = A[static_cast<size_t>(t)][i * dim + k];
                        if (!av) continue;
                        for (int s = 0; s < e; ++s)
                            K.axpy_acc(acc[static_cast<size_t>(t + s)].data(), B[static_cast<size_t>(s)].data() + k * dim,
                                       av, dim);
                    }
                    if (++used >= budget / static_cast<size_t>(e) && k + 1 < dim) {
                        for (auto& v : acc) K.reduce_mod(v.data(), dim, m);
                        used = 0;
                    }
                }
                for (auto& v : acc) K.reduce_mod(v.data(), dim, m);
            } else {
                std::fill(acc128.begin(), acc128.end(), 0);
                size_t used = 0;
                const size_t budget128 = 1024;
                for (size_t k = 0; k < dim; ++k) {
                    bool nz = false;
                    for (int t = 0; t < e; ++t)
                        if (A[static_cast<size_t>(t)][i * dim + k]) nz = true;
                    if (!nz) continue;
                    for (int t = 0; t < e; ++t) {
                        uint64_t av = A[static_cast<size_t>(t)][i * dim + k];
                        if (!av) continue;
                        for (int s = 0; s < e; ++s) {
                            unsigned __int128* dst = acc128.data() + static_cast<size_t>(t + s) * dim;
                            const uint64_t* src = B[static_cast<size_t>(s)].data() + k * dim;
                            for (size_t j = 0; j < dim; ++j) dst[j] += static_cast<unsigned __int128>(av) * src[j];
                        }
                    }
                    if (++used >= budget128 && k + 1 < dim) {
                        for (size_t t = 0; t < acc128.size(); ++t) acc128[t] = acc128[t] % m;
                        used = 0;
                    }
                }
                for (int t = 0; t < nacc; ++t)
                    for (size_t j = 0; j < dim; ++j)
                        acc[static_cast<size_t>(t)][j] = static_cast<uint64_t>(acc128[static_cast<size_t>(t) * dim + j] % m);
            }
            // fold the high coefficient slots through the minimal polynomial
            for (size_t j = 0; j < dim; ++j) {
                for (int s = 0; s < e; ++s) C[static_cast<size_t>(s)][i * dim + j] = acc[static_cast<size_t>(s)][j];
                for (int k2 = 0; k2 < e - 1; ++k2) {
                    uint64_t hi = acc[static_cast<size_t>(e + k2)][j];
                    if (!hi) continue;
                    const std::vector<uint64_t>& row = ctx.red[static_cast<size_t>(k2)];
                    for (int s = 0; s < e; ++s)
                        C[static_cast<size_t>(s)][i * dim + j] =
                            kern::addmod(C[static_cast<size_t>(s)][i * dim + j], kern::mulmod(hi, row[static_cast<size_t>(s)], m), m);
                }
            }
        }
    };

    unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(dim));
    if (workers <= 1) {
        do_rows(0, dim);
        return;
    }
    std::vector<std::thread> pool;
    size_t chunk = (dim + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
        size_t r0 = t * chunk, r1 = std::min(dim, r0 + chunk);
        if (r0 >= r1) break;
        pool.emplace_back(do_rows, r0, r1);
    }
    for (auto& th : pool) th.join();
}

Elem plane_trace(const CycloContext& ctx, const std::vector<std::vector<uint64_t>>& P, size_t dim,
                 int lost) {
    Elem t = ctx.zero();
    t.exact = false;
    t.known_zero = false;
    t.lost = lost;
    for (size_t i = 0; i < dim; ++i)
        for (size_t s = 0; s < P.size(); ++s)
            t.c[s] = kern::addmod(t.c[s], P[s][i * dim + i], ctx.pM);
    return t;
}

}  // namespace

std::vector<std::pair<Int, Valuation>> CharSeries::points(bool allow_floors) const {
    std::vector<std::pair<Int, Valuation>> pts;
    for (const CharCoefficient& c : coeff) {
        if (!c.certified && !allow_floors) continue;
        pts.emplace_back(Int(c.N), c.val);
    }
    return pts;
}

CharSeries char_series(const UpMatrix& M, int N_max) {
    const CycloContext& ctx = *M.ctx;
    const int64_t p = ctx.p;

    // certification needs a strictly decreasing a (every excluded row then
    // carries a positive structural floor)
    bool certifiable = M.excluded_row_floor > 0;
    Rat excluded_floor = M.excluded_row_floor;

    // traces of powers
    std::vector<Elem> traces;
    traces.push_back(plane_trace(ctx, M.plane, M.dim, M.lost));
    std::vector<std::vector<uint64_t>> B = M.plane, C;
    for (int k = 2; k <= N_max; ++k) {
        plane_matmul(ctx, B, M.plane, C, M.dim);
        B.swap(C);
        traces.push_back(plane_trace(ctx, B, M.dim, M.lost));
    }

    // Newton identities: N c_N = -(p_N + sum_{k=1}^{N-1} p_k c_{N-k})
    std::vector<Elem> cs;
    cs.push_back(ctx.one());
    for (int N = 1; N <= N_max; ++N) {
        Elem acc = traces[static_cast<size_t>(N) - 1];
        for (int k = 1; k < N; ++k) acc += traces[static_cast<size_t>(k) - 1] * cs[static_cast<size_t>(N - k)];
        acc = -acc;
        // divide by N = p^v u
        int v = 0;
        int64_t u = N;
        while (u % p == 0) {
            u /= p;
            ++v;
        }
        Elem inv = ctx.from_residue(kern::invmod(static_cast<uint64_t>(u) % ctx.pM, ctx.pM));
        acc = acc * inv;
        if (v) acc = acc.div_exact_p(v);
        cs.push_back(acc);
    }

    // sorted row floors for the truncation-error bound
    std::vector<Rat> floors;
    for (const Valuation& f : M.row_floor)
        if (!f.is_inf()) floors.push_back(f.finite());
    std::sort(floors.begin(), floors.end());

    CharSeries out;
    out.N_max = N_max;
    for (int N = 0; N <= N_max; ++N) {
        CharCoefficient cc;
        cc.N = N;
        cc.value = cs[static_cast<size_t>(N)];
        ValResult vr = valuation(cc.value);
        cc.val = vr.val;
        cc.val_is_floor = vr.is_floor;
        if (N == 0) {
            cc.certified = true;
        } else if (!certifiable) {
            cc.certified = false;
        } else {
            Rat err = excluded_floor;
            for (int k = 0; k < N - 1 && k < static_cast<int>(floors.size()); ++k)
                err += floors[static_cast<size_t>(k)];
            cc.certified = !vr.is_floor && !vr.val.is_inf() && vr.val.finite() < err;
        }
        out.coeff.push_back(std::move(cc));
    }
    return out;
}

}  // namespace halo
