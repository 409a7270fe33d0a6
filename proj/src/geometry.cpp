#include "halo/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace halo {

namespace {

Int rat_floor(const Rat& x) {
    Int n = numerator(x), d = denominator(x);
    Int q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

}  // namespace

DisconnectCertificate disconnect_certificate(const Rat& alpha, int n, const Rat& A1) {
    if (alpha <= 0) throw std::invalid_argument("disconnect_certificate: alpha <= 0");
    if (A1 <= 0) throw std::invalid_argument("disconnect_certificate: A1 <= 0");
    DisconnectCertificate cert;
    cert.alpha = alpha;
    const int d = n * (n - 1) / 2;
    Rat ratio = alpha / A1;
    Rat da = 1;
    for (int i = 0; i < d; ++i) da *= ratio;
    cert.d_alpha = da;
    cert.nu_alpha = Rat(1) / (alpha * da);

    // integer slope parameters live in [0, alpha d_alpha]; run lengths in [1, d_alpha]
    Int lam_max = rat_floor(alpha * da);
    Int len_max = rat_floor(da);
    std::vector<Rat> lattice;
    for (Int len = 1; len <= len_max; ++len)
        for (Int diff = 0; diff <= lam_max; ++diff) lattice.emplace_back(Rat(diff, len));
    std::sort(lattice.begin(), lattice.end());
    lattice.erase(std::unique(lattice.begin(), lattice.end()), lattice.end());
    cert.lattice = lattice;

    bool found = false;
    Rat best;
    for (const Rat& l : lattice) {
        if (l == alpha) {
            cert.alpha_in_lattice = true;
            continue;
        }
        Rat dist = l > alpha ? l - alpha : alpha - l;
        if (!found || dist < best) {
            best = dist;
            found = true;
        }
    }
    if (found) {
        cert.gap = best;
        cert.gap_positive = best > 0;
    }
    return cert;
}

Int ordinary_degree(const std::vector<std::pair<Int, Valuation>>& c_vals) {
    if (c_vals.empty()) throw std::invalid_argument("ordinary_degree: empty input");
    bool anchored = false;
    for (const auto& [N, v] : c_vals)
        if (N == 0 && v == Valuation::of(0)) anchored = true;
    if (!anchored) throw std::invalid_argument("ordinary_degree: c_0 must be a unit");
    Int best = 0;
    for (const auto& [N, v] : c_vals)
        if (v == Valuation::of(0) && N > best) best = N;
    return best;
}

}  // namespace halo
