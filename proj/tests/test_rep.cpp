#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "halo/rep.hpp"
#include "oracles.hpp"

#include <functional>
#include <random>

using namespace halo;

namespace {

std::vector<Int> iv(std::initializer_list<long> xs) {
    std::vector<Int> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

WeightCharacter mkw(int n, std::vector<int> conds, std::vector<int> tame = {},
                    std::vector<int> ks = {}) {
    WeightCharacter w;
    w.n = n;
    w.t.assign(static_cast<size_t>(n), 0);
    for (size_t i = 0; i < conds.size(); ++i) {
        WildChar wc;
        wc.cond = conds[i];
        wc.k = i < ks.size() ? ks[i] : (conds[i] > 1 ? 1 : 0);
        w.wild.push_back(wc);
    }
    w.tame = std::move(tame);
    return w;
}

}  // namespace

TEST_CASE("weyl dimension formula") {
    CHECK(weyl_dim(3, iv({0, 0, 0})) == 1);
    CHECK(weyl_dim(5, iv({2, 2, 2, 2, 2})) == 1);  // determinant powers are 1-dim
    for (long m = 0; m <= 9; ++m) CHECK(weyl_dim(2, iv({m, 0})) == m + 1);
    CHECK(weyl_dim(3, iv({2, 1, 0})) == 8);
    CHECK(weyl_dim(3, iv({1, 0, 0})) == 3);
    CHECK_THROWS(weyl_dim(2, iv({0, 1})));
}

TEST_CASE("weyl dimension equals the chain enumeration for n=3, m <= 4") {
    for (long m1 = 0; m1 <= 4; ++m1)
        for (long m2 = 0; m2 <= 4; ++m2) {
            std::vector<Int> t = iv({m1 + m2, m2, 0});
            CHECK(weyl_dim(3, t) == oracles::chain_count(t, 3));
        }
}

TEST_CASE("weyl dimension is a polynomial of total degree n(n-1)/2 in m") {
    // finite differences of order deg+1 vanish along each axis, and some mixed
    // difference of total order deg is a nonzero constant
    for (int n : {2, 3, 4}) {
        const int deg = n * (n - 1) / 2;
        auto dim_at = [&](const std::vector<long>& m) {
            std::vector<Int> t(static_cast<size_t>(n), 0);
            for (int i = n - 2; i >= 0; --i)
                t[static_cast<size_t>(i)] = t[static_cast<size_t>(i) + 1] + m[static_cast<size_t>(i)];
            return weyl_dim(n, t);
        };
        // iterated forward difference along one axis
        std::function<Int(std::vector<long>, int, int)> diff =
            [&](std::vector<long> m, int axis, int order) -> Int {
            if (order == 0) return dim_at(m);
            std::vector<long> up = m;
            up[static_cast<size_t>(axis)] += 1;
            return diff(up, axis, order - 1) - diff(m, axis, order - 1);
        };
        for (int axis = 0; axis < n - 1; ++axis) {
            std::vector<long> base(static_cast<size_t>(n) - 1, 1);
            CHECK(diff(base, axis, deg + 1) == 0);
        }
        // mixed difference of total order deg: distribute orders evenly
        std::vector<int> orders(static_cast<size_t>(n) - 1, deg / (n - 1));
        for (int rem = deg % (n - 1), i = 0; rem > 0; --rem, ++i) ++orders[static_cast<size_t>(i)];
        std::function<Int(std::vector<long>, int)> mixed = [&](std::vector<long> m, int axis) -> Int {
            if (axis == n - 1) return dim_at(m);
            Int acc = 0;
            // expand the iterated difference along `axis` of order orders[axis]
            int k = orders[static_cast<size_t>(axis)];
            for (int i = 0; i <= k; ++i) {
                std::vector<long> shifted = m;
                shifted[static_cast<size_t>(axis)] += i;
                Int sign = (k - i) % 2 == 0 ? 1 : -1;
                acc += sign * binom(Int(k), i) * mixed(shifted, axis + 1);
            }
            return acc;
        };
        std::vector<long> base(static_cast<size_t>(n) - 1, 2);
        CHECK(mixed(base, 0) != 0);
    }
}

TEST_CASE("slope budget") {
    SUBCASE("identity operator: zero budget") {
        SlopeBudget sb = slope_budget(3, iv({0, 0, 0}), iv({2, 1, 0}));
        CHECK(sb.value == 0);
        CHECK(sb.slope_sum == 0);
    }
    SUBCASE("n=2 displayed pairing gives -1 - m_1") {
        for (long m1 = 0; m1 <= 6; ++m1) {
            SlopeBudget sb = slope_budget(2, iv({1, 0}), iv({m1, 0}));
            CHECK(sb.value == Rat(-1 - m1));
            // the definitional pairing gives the nonnegative companion sum
            CHECK(sb.slope_sum == Rat(1 + m1));
        }
    }
    SUBCASE("closed-form comparison is reported, not patched") {
        SlopeBudget sb = slope_budget(3, iv({2, 1, 0}), iv({1, 1, 0}));
        CHECK(sb.mismatch == (sb.value != sb.closed_form));
        CHECK(sb.per_w.size() == 6);
    }
    SUBCASE("psi-supplied recomputation is permutation invariant") {
        std::mt19937_64 rng(555);
        for (int trial = 0; trial < 100; ++trial) {
            int n = 2 + static_cast<int>(rng() % 3);
            std::vector<Int> a, m;
            long prev = 6;
            for (int i = 0; i < n; ++i) {
                long ai = prev - static_cast<long>(rng() % 3);
                a.emplace_back(ai);
                prev = ai;
                m.emplace_back(static_cast<long>(rng() % 4));
            }
            std::vector<Rat> psi;
            for (int i = 0; i < n; ++i) psi.emplace_back(static_cast<long>(rng() % 7), 1 + static_cast<long>(rng() % 3));
            SlopeBudget sb1 = slope_budget(n, a, m, &psi);
            std::shuffle(psi.begin(), psi.end(), rng);
            SlopeBudget sb2 = slope_budget(n, a, m, &psi);
            CHECK(sb1.value == sb2.value);
            CHECK(sb1.slope_sum == sb2.slope_sum);
        }
    }
}

TEST_CASE("lambda/psi conversion") {
    SUBCASE("roundtrip is the identity") {
        std::mt19937_64 rng(321);
        for (int trial = 0; trial < 100; ++trial) {
            int n = 2 + static_cast<int>(rng() % 3);
            std::vector<Int> m;
            for (int i = 0; i < n; ++i) m.emplace_back(static_cast<long>(rng() % 5));
            std::vector<Valuation> vals;
            for (int i = 0; i < n; ++i)
                vals.push_back(Valuation::of(Rat(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 2))));
            auto there = lambda_psi_convert(n, m, vals, ConvertDirection::psi_to_lambda);
            auto back = lambda_psi_convert(n, m, there, ConvertDirection::lambda_to_psi);
            CHECK(back == vals);
        }
    }
    SUBCASE("n=2 shift: v(lambda_1) = 1/2 when psi_1(p) is a unit and m_2 = 0") {
        std::vector<Valuation> psi{Valuation::of(0), Valuation::of(0)};
        auto lam = lambda_psi_convert(2, iv({4, 0}), psi, ConvertDirection::psi_to_lambda);
        CHECK(lam[0] == Valuation::of(Rat(1, 2)));
    }
    SUBCASE("n=2 central relation: v(lambda_1 lambda_2 / psi_1 psi_2) = -(2 m_2 + m_1)") {
        for (long m1 = 0; m1 <= 3; ++m1)
            for (long m2 = 0; m2 <= 3; ++m2) {
                std::vector<Valuation> psi{Valuation::of(Rat(1, 3)), Valuation::of(2)};
                auto lam = lambda_psi_convert(2, iv({m1, m2}), psi, ConvertDirection::psi_to_lambda);
                Rat lhs = lam[0].finite() + lam[1].finite() - psi[0].finite() - psi[1].finite();
                CHECK(lhs == Rat(-(2 * m2 + m1)));
            }
    }
    SUBCASE("infinite slope is rejected") {
        std::vector<Valuation> bad{Valuation::inf(), Valuation::of(0)};
        CHECK_THROWS(lambda_psi_convert(2, iv({1, 0}), bad, ConvertDirection::lambda_to_psi));
    }
}

TEST_CASE("classicality slope criterion") {
    CHECK(classicality_check({Rat(0), Rat(0)}, iv({5, 2, 0})));
    CHECK_FALSE(classicality_check({Rat(2)}, iv({1, 0})));  // boundary 2 < 2 fails
    CHECK(classicality_check({Rat(0), Rat(1)}, iv({3, 1, 0})));
    CHECK(classicality_check({Rat(0)}, iv({0, 0})));
}

TEST_CASE("mackey brute force") {
    SUBCASE("conductor-1 with tame part: one-dimensional, irreducible") {
        WeightCharacter w = mkw(2, {1, 1}, {1, 0});
        MackeyResult r = mackey_bruteforce(w, 3);
        CHECK(r.induced_dim == 1);
        CHECK(r.irreducible);
        CHECK(r.intertwiner_dim == 1);
    }
    SUBCASE("p=3 n=2 conductor 2: three-dimensional, irreducible") {
        for (int k : {1, 2}) {
            WeightCharacter w = mkw(2, {2, 1}, {}, {k, 0});
            MackeyResult r = mackey_bruteforce(w, 3);
            CHECK(r.induced_dim == 3);
            CHECK(r.irreducible);
            CHECK(is_simple(w, 3).simple);
        }
    }
    SUBCASE("induced dimension equals p^j across small cases") {
        for (long p : {3L, 5L}) {
            for (int cond : {1, 2}) {
                WeightCharacter w = mkw(2, {cond, 1});
                MackeyResult r = mackey_bruteforce(w, p);
                RocheData rd = roche_subgroup(w, p);
                CHECK(r.induced_dim == ipow(Int(p), rd.j_index.convert_to<unsigned long>()));
                if (is_simple(w, p).simple) CHECK(r.irreducible);
            }
        }
    }
    SUBCASE("a condition-1 violation where constructible: norm reported") {
        // identical conductor-2 characters: the ratio is trivial, J is the
        // whole Iwahori group, the induction is 1-dimensional
        WeightCharacter w = mkw(2, {2, 2}, {}, {1, 1});
        MackeyResult r = mackey_bruteforce(w, 3);
        CHECK(r.induced_dim == 1);
        CHECK(r.intertwiner_dim == 1);
        CHECK_FALSE(is_simple(w, 3).simple);
    }
    SUBCASE("budget guard") {
        WeightCharacter w = mkw(3, {3, 3, 1});
        CHECK_THROWS_AS(mackey_bruteforce(w, 5), std::domain_error);
    }
}
