#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace halo {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int binom(const Int& n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    Int r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= (n - (k - i));
        r /= i;
    }
    return r;
}

inline Int ipow(const Int& b, unsigned long e) {
    Int r = 1, x = b;
    while (e) {
        if (e & 1) r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

// Exact p-adic valuation of a nonzero integer.
inline long int_valuation(Int x, const Int& p) {
    if (x == 0) throw std::invalid_argument("int_valuation: zero");
    if (x < 0) x = -x;
    long v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

inline Rat rat_valuation_shiftless(const Rat& x, const Int& p) {
    // valuation of a nonzero rational as a rational integer
    if (x == 0) throw std::invalid_argument("rat_valuation: zero");
    return Rat(int_valuation(numerator(x), p) - int_valuation(denominator(x), p));
}

// A valuation value: an exact rational, or +infinity (valuation of zero).
// Infinity absorbs under addition and is maximal under comparison.
struct Valuation {
    bool infinite = false;
    Rat v{};

    Valuation() = default;
    static Valuation inf() {
        Valuation r;
        r.infinite = true;
        return r;
    }
    static Valuation of(Rat x) {
        Valuation r;
        r.v = std::move(x);
        return r;
    }

    bool is_inf() const { return infinite; }
    const Rat& finite() const {
        if (infinite) throw std::logic_error("Valuation: infinite has no finite value");
        return v;
    }

    friend bool operator==(const Valuation& a, const Valuation& b) {
        if (a.infinite || b.infinite) return a.infinite && b.infinite;
        return a.v == b.v;
    }
    friend bool operator!=(const Valuation& a, const Valuation& b) { return !(a == b); }
    friend bool operator<(const Valuation& a, const Valuation& b) {
        if (a.infinite) return false;
        if (b.infinite) return true;
        return a.v < b.v;
    }
    friend bool operator<=(const Valuation& a, const Valuation& b) { return a < b || a == b; }
    friend bool operator>(const Valuation& a, const Valuation& b) { return b < a; }
    friend bool operator>=(const Valuation& a, const Valuation& b) { return b <= a; }

    friend Valuation operator+(const Valuation& a, const Valuation& b) {
        if (a.infinite || b.infinite) return inf();
        return of(a.v + b.v);
    }
    friend Valuation min(const Valuation& a, const Valuation& b) { return a < b ? a : b; }

    std::string str() const {
        if (infinite) return "inf";
        return numerator(v).str() + "/" + denominator(v).str();
    }
};

inline std::string rat_str(const Rat& x) {
    return numerator(x).str() + "/" + denominator(x).str();
}

}  // namespace halo
