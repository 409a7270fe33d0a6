#pragma once

#include "halo/rational.hpp"

#include <vector>

namespace halo {

// Formula-level disconnectedness certificate: the slope-lattice trapping data
// of the boundary decomposition. The artifact certifies the finite lattice and
// the gap, not the geometry of a rigid space.
struct DisconnectCertificate {
    Rat alpha;
    Rat d_alpha;   // (alpha / A1)^{n(n-1)/2}
    Rat nu_alpha;  // strict threshold 1 / (alpha d_alpha)
    std::vector<Rat> lattice;  // possible slope / v(T_a) ratios below alpha
    bool alpha_in_lattice = false;
    Rat gap;  // min distance from alpha to lattice \ {alpha}
    bool gap_positive = false;
};

DisconnectCertificate disconnect_certificate(const Rat& alpha, int n, const Rat& A1);

// Maximal N with v(c_N) = 0; requires v(c_0) = 0.
Int ordinary_degree(const std::vector<std::pair<Int, Valuation>>& c_vals);

}  // namespace halo
