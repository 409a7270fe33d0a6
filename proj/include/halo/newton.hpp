#pragma once

#include "halo/rational.hpp"

#include <utility>
#include <vector>

namespace halo {

// Lower convex hull of (index, valuation) points with exact rational slopes.
struct NewtonPolygon {
    std::vector<std::pair<Int, Rat>> vertices;  // x strictly increasing, y finite
    std::vector<std::pair<Rat, Int>> slopes;    // nondecreasing, multiplicities sum to x-extent

    Int extent() const { return vertices.empty() ? Int(0) : vertices.back().first; }
    // y-value of the hull at rational x inside the extent
    Rat value_at(const Rat& x) const;
};

// Hull of the given points; entries with infinite valuation are skipped. The
// anchor (0, 0) must be present.
NewtonPolygon lower_hull(const std::vector<std::pair<Int, Valuation>>& pts);

struct SlopesBelow {
    Int count;
    Int end_x;
    Rat end_y;
};
SlopesBelow slopes_below(const NewtonPolygon& np, const Rat& alpha);

struct AboveResult {
    bool ok = true;
    Rat witness_x;  // first bound x where the polygon dips below
    Rat bound_y;
    Rat poly_y;
};
// Does the polygon stay >= the piecewise-linear interpolation of the bound
// points at every bound x-coordinate inside the polygon extent?
AboveResult lies_above(const NewtonPolygon& np, const std::vector<std::pair<Rat, Rat>>& bound);

// Monotone curve descriptor nu for Wan's coincidence lemma. linear: nu(x) = a x.
// power: nu(x) = a x^{1/root_degree} (a carries any v(T) factor); inverses and
// the floor m_nu are evaluated in closed form, exactly.
struct NuCurve {
    enum class Kind { linear, power } kind = Kind::linear;
    Rat a = 1;
    int root_degree = 1;

    static NuCurve lin(Rat a);
    static NuCurve pow(Rat a, int d);
};

// m_nu(x) = floor(x * nu^{-1}(x)), exact
Int m_nu(const NuCurve& nu, const Rat& x);

// checks N(x) >= x nu(x) for every x >= 1 up to the hull extent
bool nu_hypothesis_holds(const NewtonPolygon& np, const NuCurve& nu);

// Wan's lemma as a self-checking harness: given coefficient valuations of two
// series with v1[0] = v2[0] = 0, the valuations of their differences, a curve
// nu dominating both hulls, and a slope cutoff alpha: requires the congruence
// hypothesis diff[N] >= m_nu(alpha) + 1 (error otherwise), then reports whether
// the hull sides of slope <= alpha coincide. Under the hypothesis the answer
// must be true.
bool wan_coincide(const std::vector<Valuation>& v1, const std::vector<Valuation>& v2,
                  const std::vector<Valuation>& diff_vals, const NuCurve& nu, const Rat& alpha);

}  // namespace halo
