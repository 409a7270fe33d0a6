#pragma once

#include "halo/modmat.hpp"
#include "halo/rational.hpp"
#include "halo/weight.hpp"

#include <map>
#include <vector>

namespace halo {

// Dimension of the irreducible algebraic representation of GL_n of highest
// weight t (dominant), by the product formula over positive roots.
Int weyl_dim(int n, const std::vector<Int>& t);

// Companion slope sum attached to an exponent vector a (nonincreasing) and the
// difference vector m (m_i = t_i - t_{i+1}, m_n = t_n).
//
// `value` follows the displayed per-companion pairing (a_{n-i+1} exponents) and
// eliminates the character part through the central relation; `closed_form` is
// the displayed (n-1)!-factor expression; `slope_sum` is the same companion sum
// under the definitional pairing prod_i lambda_i^{a_i}, which is the
// nonnegative linear form the bound tables use. Any disagreement between
// `value` and `closed_form` is reported, not patched.
struct SlopeBudget {
    std::vector<Int> a;
    Rat value;
    Rat closed_form;
    Rat slope_sum;
    bool mismatch;
    std::map<std::vector<int>, Rat> per_w;  // permutation -> valuation contribution
};
SlopeBudget slope_budget(int n, const std::vector<Int>& a, const std::vector<Int>& m,
                         const std::vector<Rat>* psi_vals = nullptr);

enum class ConvertDirection { lambda_to_psi, psi_to_lambda };
// valuation-level conversion lambda_i = p^{(n-1)/2 - i + 1 - m_n - ... - m_{n-i+1}} psi_i(p)
std::vector<Valuation> lambda_psi_convert(int n, const std::vector<Int>& m,
                                          const std::vector<Valuation>& vals, ConvertDirection dir);

// v(lambda_1 ... lambda_i) < t_i - t_{i+1} + 1 for i = 1..n-1
bool classicality_check(const std::vector<Rat>& lambda_vals, const std::vector<Int>& t);

struct MackeyResult {
    bool irreducible;
    Int intertwiner_dim;
    Int induced_dim;  // index of the Roche subgroup, = p^{j(chi)}
};
// Explicit Mackey computation over the finite quotient of the Iwahori group:
// builds the subgroup attached to the weight's finite part, extends the torus
// character through the triangular factorization, and counts the double cosets
// on which the character agrees with its conjugate. Enumeration only; throws
// when the subgroup is too large for the element budget.
MackeyResult mackey_bruteforce(const WeightCharacter& w, int64_t p, bool assert_condition1 = false);

// Left cosets of the congruence subgroup Gamma(c_matrix) in the Iwahori group
// over Z/p^mm, by breadth-first closure. Exposed for the index cross-checks.
std::vector<ModMat> iwahori_cosets(int n, int64_t p, const std::vector<std::vector<int>>& c_matrix,
                                   int mm, size_t budget = 2000000);

}  // namespace halo
