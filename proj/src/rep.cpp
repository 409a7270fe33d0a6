#include "halo/rep.hpp"

#include "halo/modmat.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace halo {

Int weyl_dim(int n, const std::vector<Int>& t) {
    if (static_cast<int>(t.size()) != n) throw std::invalid_argument("weyl_dim: |t| != n");
    for (int i = 0; i + 1 < n; ++i)
        if (t[static_cast<size_t>(i)] < t[static_cast<size_t>(i) + 1])
            throw std::invalid_argument("weyl_dim: t not dominant");
    Int num = 1, den = 1;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            num *= t[static_cast<size_t>(i)] - t[static_cast<size_t>(j)] + (j - i);
            den *= (j - i);
        }
    return num / den;
}

namespace {

Rat factorial(int n) {
    Rat r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// E_i = (n-1)/2 - i + 1 - (m_n + ... + m_{n-i+1}), 1-based i
std::vector<Rat> slot_shifts(int n, const std::vector<Int>& m) {
    std::vector<Rat> E(static_cast<size_t>(n));
    Rat tail = 0;
    for (int io = 0; io < n; ++io) {
        tail += Rat(m[static_cast<size_t>(n - 1 - io)]);
        E[static_cast<size_t>(io)] = Rat(n - 1, 2) - io - tail;
    }
    return E;
}

}  // namespace

SlopeBudget slope_budget(int n, const std::vector<Int>& a, const std::vector<Int>& m,
                         const std::vector<Rat>* psi_vals) {
    if (static_cast<int>(a.size()) != n || static_cast<int>(m.size()) != n)
        throw std::invalid_argument("slope_budget: |a| = |m| = n required");
    for (int i = 0; i + 1 < n; ++i)
        if (a[static_cast<size_t>(i)] < a[static_cast<size_t>(i) + 1])
            throw std::invalid_argument("slope_budget: a must be nonincreasing");
    for (const Int& mi : m)
        if (mi < 0) throw std::invalid_argument("slope_budget: m must be nonnegative");
    if (psi_vals && static_cast<int>(psi_vals->size()) != n)
        throw std::invalid_argument("slope_budget: |psi_vals| != n");

    SlopeBudget out;
    out.a = a;
    std::vector<Rat> E = slot_shifts(n, m);
    Rat total_a = 0;
    for (const Int& ai : a) total_a += Rat(ai);
    Rat sum_jm = 0;  // sum_j j m_j
    for (int j = 0; j < n; ++j) sum_jm += Rat(j + 1) * Rat(m[static_cast<size_t>(j)]);

    // reversed pairing sum_i a_{n-i+1} E_i and definitional pairing sum_i a_i E_i
    Rat revE = 0, stdE = 0;
    for (int io = 0; io < n; ++io) {
        revE += Rat(a[static_cast<size_t>(n - 1 - io)]) * E[static_cast<size_t>(io)];
        stdE += Rat(a[static_cast<size_t>(io)]) * E[static_cast<size_t>(io)];
    }

    Rat sum_psi = sum_jm;  // eliminated via the central relation prod lambda_i = 1
    std::vector<Rat> psi(static_cast<size_t>(n), Rat(0));
    if (psi_vals) {
        psi = *psi_vals;
        sum_psi = std::accumulate(psi.begin(), psi.end(), Rat(0));
    }

    const Rat fn = factorial(n), fn1 = factorial(n - 1);
    out.value = fn * revE + fn1 * total_a * sum_psi;
    out.slope_sum = fn * stdE + fn1 * total_a * sum_psi;

    // the displayed closed form
    Rat head = 0, mhead = 0;
    {
        Rat acc = 0;
        for (int j = 0; j < n; ++j) {
            acc += Rat(a[static_cast<size_t>(j)]);
            mhead += Rat(m[static_cast<size_t>(j)]) * acc;
        }
        for (int io = 0; io < n; ++io)
            head += Rat(a[static_cast<size_t>(n - 1 - io)]) * (Rat(n - 1, 2) - io);
    }
    out.closed_form = fn1 * (head - mhead + sum_jm * total_a);
    out.mismatch = (out.value != out.closed_form);

    // per-companion breakdown (enumeration cap keeps this honest but bounded)
    if (n <= 6) {
        std::vector<int> perm(static_cast<size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        do {
            Rat v = 0;
            for (int io = 0; io < n; ++io) {
                Rat lam = E[static_cast<size_t>(io)];
                if (psi_vals) lam += psi[static_cast<size_t>(perm[static_cast<size_t>(io)])];
                v += Rat(a[static_cast<size_t>(n - 1 - io)]) * lam;
            }
            out.per_w[perm] = v;
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (psi_vals) {
            Rat check = 0;
            for (const auto& [w, v] : out.per_w) check += v;
            if (check != out.value)
                throw std::logic_error("slope_budget: direct product disagrees with elimination");
        }
    }
    return out;
}

std::vector<Valuation> lambda_psi_convert(int n, const std::vector<Int>& m,
                                          const std::vector<Valuation>& vals,
                                          ConvertDirection dir) {
    if (static_cast<int>(vals.size()) != n || static_cast<int>(m.size()) != n)
        throw std::invalid_argument("lambda_psi_convert: |vals| = |m| = n required");
    std::vector<Rat> E = slot_shifts(n, m);
    std::vector<Valuation> out;
    for (int i = 0; i < n; ++i) {
        if (vals[static_cast<size_t>(i)].is_inf())
            throw std::invalid_argument("lambda_psi_convert: zero input (infinite slope)");
        Rat v = vals[static_cast<size_t>(i)].finite();
        Rat shifted = (dir == ConvertDirection::psi_to_lambda) ? Rat(v + E[static_cast<size_t>(i)])
                                                               : Rat(v - E[static_cast<size_t>(i)]);
        out.push_back(Valuation::of(shifted));
    }
    return out;
}

bool classicality_check(const std::vector<Rat>& lambda_vals, const std::vector<Int>& t) {
    const int n = static_cast<int>(t.size());
    for (int i = 0; i + 1 < n; ++i)
        if (t[static_cast<size_t>(i)] < t[static_cast<size_t>(i) + 1])
            throw std::invalid_argument("classicality_check: t not dominant");
    if (static_cast<int>(lambda_vals.size()) < n - 1)
        throw std::invalid_argument("classicality_check: need lambda_1..lambda_{n-1}");
    Rat acc = 0;
    for (int i = 0; i + 1 < n; ++i) {
        acc += lambda_vals[static_cast<size_t>(i)];
        if (!(acc < Rat(t[static_cast<size_t>(i)] - t[static_cast<size_t>(i) + 1] + 1))) return false;
    }
    return true;
}

namespace {

uint64_t upow(uint64_t b, int e) {
    uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

uint64_t primitive_root_mod_p_power(int64_t p, int mm) {
    // odd p: a generator mod p that also generates mod p^2 generates all powers
    uint64_t pm = upow(static_cast<uint64_t>(p), mm);
    uint64_t phi = static_cast<uint64_t>(p - 1) * upow(static_cast<uint64_t>(p), mm - 1);
    std::vector<uint64_t> qs;
    uint64_t f = phi;
    for (uint64_t d = 2; d * d <= f; ++d)
        while (f % d == 0) {
            qs.push_back(d);
            while (f % d == 0) f /= d;
        }
    if (f > 1) qs.push_back(f);
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    for (uint64_t g = 2; g < pm; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (uint64_t d : qs)
            if (kern::powmod(g, phi / d, pm) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root found");
}

bool in_gamma(const ModMat& g, int64_t p, const std::vector<std::vector<int>>& c) {
    const int n = g.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            uint64_t want = (i == j) ? 1 : 0;
            uint64_t diff = kern::submod(g(i, j), want, g.m);
            uint64_t d = upow(static_cast<uint64_t>(p), c[static_cast<size_t>(i)][static_cast<size_t>(j)]);
            if (diff % d != 0) return false;
        }
    return true;
}

std::vector<ModMat> iwahori_generators(int n, int64_t p, uint64_t pm) {
    std::vector<ModMat> gens;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            ModMat e = ModMat::identity(n, pm);
            e(i, j) = (i < j) ? 1 : static_cast<uint64_t>(p) % pm;
            gens.push_back(e);
        }
    uint64_t g = primitive_root_mod_p_power(p, 1);
    // a primitive root mod p^mm; recompute against the full modulus
    {
        int mm = 0;
        uint64_t t = pm;
        while (t > 1) {
            t /= static_cast<uint64_t>(p);
            ++mm;
        }
        g = primitive_root_mod_p_power(p, mm);
    }
    for (int i = 0; i < n; ++i) {
        ModMat d = ModMat::identity(n, pm);
        d(i, i) = g % pm;
        gens.push_back(d);
    }
    return gens;
}

// row-normalized reduction mod p, packed: a cheap left-Gamma(c)-invariant
// bucket key when all off-diagonal depths are >= 1
uint64_t bucket_key(const ModMat& g, int64_t p) {
    uint64_t key = 1;
    for (int i = 0; i < g.n; ++i) {
        uint64_t lead = 0;
        for (int j = 0; j < g.n; ++j) {
            uint64_t v = g(i, j) % static_cast<uint64_t>(p);
            if (!lead && v) lead = kern::invmod(v, static_cast<uint64_t>(p));
            key = key * static_cast<uint64_t>(p) +
                  (lead ? kern::mulmod(v, lead, static_cast<uint64_t>(p)) : v);
        }
    }
    return key;
}

}  // namespace

std::vector<ModMat> iwahori_cosets(int n, int64_t p, const std::vector<std::vector<int>>& c_matrix,
                                   int mm, size_t budget) {
    uint64_t pm = upow(static_cast<uint64_t>(p), mm);
    std::vector<ModMat> gens = iwahori_generators(n, p, pm);
    std::vector<ModMat> reps;
    std::vector<ModMat> rep_invs;
    std::unordered_map<uint64_t, std::vector<size_t>> buckets;

    // the row-normalized mod-p key is left-invariant only when every
    // off-diagonal depth is >= 1 (the subgroup is diagonal mod p); otherwise
    // fall back to a single bucket
    bool bucketing = true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && c_matrix[static_cast<size_t>(i)][static_cast<size_t>(j)] < 1) bucketing = false;
    auto key_of = [&](const ModMat& g) -> uint64_t { return bucketing ? bucket_key(g, p) : 1; };

    auto find_coset = [&](const ModMat& g) -> int {
        auto it = buckets.find(key_of(g));
        if (it == buckets.end()) return -1;
        for (size_t idx : it->second)
            if (in_gamma(g * rep_invs[idx], p, c_matrix)) return static_cast<int>(idx);
        return -1;
    };

    ModMat id = ModMat::identity(n, pm);
    reps.push_back(id);
    rep_invs.push_back(id);
    buckets[key_of(id)].push_back(0);
    for (size_t head = 0; head < reps.size(); ++head) {
        for (const ModMat& g : gens) {
            ModMat cand = reps[head] * g;
            if (find_coset(cand) >= 0) continue;
            buckets[key_of(cand)].push_back(reps.size());
            reps.push_back(cand);
            rep_invs.push_back(cand.inverse(static_cast<uint64_t>(p)));
            if (reps.size() > budget) throw std::domain_error("iwahori_cosets: beyond enumeration budget");
        }
    }
    return reps;
}

MackeyResult mackey_bruteforce(const WeightCharacter& w, int64_t p, bool assert_condition1) {
    w.validate();
    if (p == 2) throw std::invalid_argument("mackey_bruteforce: p = 2 outside enumeration support");
    const int n = w.n;
    if (n > 3) throw std::invalid_argument("mackey_bruteforce: n beyond enumeration support");
    RocheData rd = roche_subgroup(w, p, assert_condition1);

    int maxr = 0, maxc = 1;
    for (int i = 0; i < n; ++i) {
        maxr = std::max(maxr, wild_exponent(p, w.conductor(i)));
        maxc = std::max(maxc, w.conductor(i));
    }
    int mm = std::max(1, maxc);
    for (const auto& row : rd.c_matrix)
        for (int v : row) mm = std::max(mm, v);
    uint64_t pm = upow(static_cast<uint64_t>(p), mm);

    // subgroup size and budget
    const size_t budget = 10000000;
    size_t jsize = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            size_t f = (i == j) ? static_cast<size_t>((p - 1)) * upow(static_cast<uint64_t>(p), mm - 1)
                                : upow(static_cast<uint64_t>(p),
                                       mm - std::min(mm, rd.c_matrix[static_cast<size_t>(i)][static_cast<size_t>(j)]));
            if (jsize > budget / std::max<size_t>(f, 1)) throw std::domain_error("mackey: beyond budget");
            jsize *= f;
        }
    if (jsize > budget) throw std::domain_error("mackey: beyond enumeration budget");

    // character exponent machinery
    int64_t ord_t = p - 1;
    Int ord = Int(ord_t) * ipow(Int(p), static_cast<unsigned long>(maxr));
    int64_t ordl = ord.convert_to<int64_t>();
    uint64_t g0 = primitive_root_mod_p_power(p, 1);
    std::vector<int> tame_dlog(static_cast<size_t>(p), -1);
    {
        uint64_t x = 1;
        for (int64_t s = 0; s < p - 1; ++s) {
            tame_dlog[static_cast<size_t>(x)] = static_cast<int>(s);
            x = x * g0 % static_cast<uint64_t>(p);
        }
    }
    // wild dlog tables per exponent r: residues mod p^{r+1} of exp(p)^s
    std::vector<std::unordered_map<uint64_t, int64_t>> wild_dlog(static_cast<size_t>(maxr) + 1);
    for (int r = 1; r <= maxr; ++r) {
        uint64_t mod = upow(static_cast<uint64_t>(p), r + 1);
        Int gen = padic_exp(Int(p), p, r + 1);
        uint64_t gg = gen.convert_to<uint64_t>() % mod;
        uint64_t x = 1;
        int64_t order = static_cast<int64_t>(upow(static_cast<uint64_t>(p), r));
        for (int64_t s = 0; s < order; ++s) {
            wild_dlog[static_cast<size_t>(r)][x] = s;
            x = kern::mulmod(x, gg, mod);
        }
    }
    auto chi_component = [&](int i, uint64_t u) -> int64_t {
        int64_t expo = 0;
        int tam = w.tame_nontrivial(i) ? w.tame[static_cast<size_t>(i)] : 0;
        if (tam) {
            int dt = tame_dlog[static_cast<size_t>(u % static_cast<uint64_t>(p))];
            expo += (static_cast<int64_t>(tam) * dt % ord_t) * (ordl / ord_t);
        }
        int r = wild_exponent(p, w.conductor(i));
        if (r > 0) {
            uint64_t mod = upow(static_cast<uint64_t>(p), r + 1);
            Int om = teich_residue(p, Int(u), r + 1);
            uint64_t one_unit =
                kern::mulmod(u % mod, kern::invmod(om.convert_to<uint64_t>() % mod, mod), mod);
            auto it = wild_dlog[static_cast<size_t>(r)].find(one_unit);
            if (it == wild_dlog[static_cast<size_t>(r)].end())
                throw std::logic_error("mackey: one-unit outside dlog table");
            int64_t pr = static_cast<int64_t>(upow(static_cast<uint64_t>(p), r));
            int64_t s = it->second % pr;
            expo += ((w.wild[static_cast<size_t>(i)].k % pr) * s % pr) * (ordl / pr);
        }
        return ((expo % ordl) + ordl) % ordl;
    };
    auto chi_of = [&](const ModMat& x) -> int64_t {
        LDU f = iwahori_factor(x, static_cast<uint64_t>(p));
        int64_t e = 0;
        for (int i = 0; i < n; ++i) e = (e + chi_component(i, f.diag(i, i))) % ordl;
        return e;
    };

    // enumerate the subgroup
    struct Slot {
        int i, j;
        std::vector<uint64_t> vals;
    };
    std::vector<Slot> slots;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Slot s;
            s.i = i;
            s.j = j;
            if (i == j) {
                for (uint64_t u = 1; u < pm; ++u)
                    if (u % static_cast<uint64_t>(p) != 0) s.vals.push_back(u);
            } else {
                int c = std::min(mm, rd.c_matrix[static_cast<size_t>(i)][static_cast<size_t>(j)]);
                uint64_t step = upow(static_cast<uint64_t>(p), c);
                for (uint64_t x = 0; x < pm; x += step) s.vals.push_back(x);
            }
            slots.push_back(std::move(s));
        }
    std::vector<ModMat> members;
    members.reserve(jsize);
    std::vector<size_t> odo(slots.size(), 0);
    while (true) {
        ModMat x(n, pm);
        for (size_t s = 0; s < slots.size(); ++s) x(slots[s].i, slots[s].j) = slots[s].vals[odo[s]];
        members.push_back(x);
        size_t s = 0;
        for (; s < slots.size(); ++s) {
            if (++odo[s] < slots[s].vals.size()) break;
            odo[s] = 0;
        }
        if (s == slots.size()) break;
    }
    if (members.size() != jsize) throw std::logic_error("mackey: enumeration mismatch");

    // the extension must be multiplicative on the subgroup
    {
        uint64_t state = 0x9e3779b97f4a7c15ull;
        auto rnd = [&]() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return state;
        };
        for (int trial = 0; trial < 200; ++trial) {
            const ModMat& x = members[rnd() % members.size()];
            const ModMat& y = members[rnd() % members.size()];
            if ((chi_of(x) + chi_of(y)) % ordl != chi_of(x * y))
                throw std::logic_error("mackey: character extension not multiplicative");
        }
    }

    std::vector<ModMat> reps = iwahori_cosets(n, p, rd.c_matrix, mm);
    Int index = Int(static_cast<long>(reps.size()));

    // partition cosets into double cosets by right multiplication
    std::vector<ModMat> rep_invs;
    rep_invs.reserve(reps.size());
    for (const ModMat& r : reps) rep_invs.push_back(r.inverse(static_cast<uint64_t>(p)));
    auto coset_of = [&](const ModMat& g) -> int {
        for (size_t i = 0; i < reps.size(); ++i)
            if (in_gamma(g * rep_invs[i], p, rd.c_matrix)) return static_cast<int>(i);
        throw std::logic_error("mackey: coset not found");
    };
    std::vector<int> cls(reps.size(), -1);
    std::vector<ModMat> jgens;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            ModMat e = ModMat::identity(n, pm);
            e(i, j) = upow(static_cast<uint64_t>(p),
                           std::min(mm, rd.c_matrix[static_cast<size_t>(i)][static_cast<size_t>(j)])) % pm;
            jgens.push_back(e);
        }
    {
        uint64_t g = primitive_root_mod_p_power(p, mm);
        for (int i = 0; i < n; ++i) {
            ModMat d = ModMat::identity(n, pm);
            d(i, i) = g;
            jgens.push_back(d);
        }
    }
    int nclasses = 0;
    for (size_t start = 0; start < reps.size(); ++start) {
        if (cls[start] >= 0) continue;
        int c = nclasses++;
        std::vector<size_t> stack{start};
        cls[start] = c;
        while (!stack.empty()) {
            size_t cur = stack.back();
            stack.pop_back();
            for (const ModMat& g : jgens) {
                int nxt = coset_of(reps[cur] * g);
                if (cls[static_cast<size_t>(nxt)] < 0) {
                    cls[static_cast<size_t>(nxt)] = c;
                    stack.push_back(static_cast<size_t>(nxt));
                }
            }
        }
    }

    // Mackey: a double coset J s J contributes iff chi and chi^s agree on the
    // intersection J cap s^{-1} J s
    Int intertwiner = 0;
    std::vector<char> seen(static_cast<size_t>(nclasses), 0);
    for (size_t ridx = 0; ridx < reps.size(); ++ridx) {
        int c = cls[ridx];
        if (seen[static_cast<size_t>(c)]) continue;
        seen[static_cast<size_t>(c)] = 1;
        const ModMat& s = reps[ridx];
        const ModMat& s_inv = rep_invs[ridx];
        bool agree = true;
        for (const ModMat& x : members) {
            ModMat y = s * x * s_inv;
            if (!in_gamma(y, p, rd.c_matrix)) continue;
            if (chi_of(x) != chi_of(y)) {
                agree = false;
                break;
            }
        }
        if (agree) intertwiner += 1;
    }

    MackeyResult res;
    res.intertwiner_dim = intertwiner;
    res.induced_dim = index;
    res.irreducible = (intertwiner == 1);
    return res;
}

}  // namespace halo
