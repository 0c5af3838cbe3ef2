#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "dosum/cyclo.hpp"
#include "dosum/field.hpp"
#include "dosum/params.hpp"

namespace dosum {

// An F_{q0}-basis v_1..v_s of F_q (q0 = p^d), with coordinate maps both ways
// through the trace-dual basis.
struct SubfieldBasis {
    std::shared_ptr<const FieldCtx> ctx;
    std::int64_t d = 0, s = 0, q0 = 0;
    std::vector<gf_t> v;     // basis elements
    std::vector<gf_t> dual;  // w_i with Tr^n_d(v_i w_j) = delta_ij

    // Coordinates of x: s elements of F_{q0} (as field codes).
    std::vector<gf_t> coords(gf_t x) const;
    void coords_into(gf_t x, gf_t* out) const;
    gf_t from_coords(const std::vector<gf_t>& X) const;
};

// variant 0: polynomial basis {1, pi, ..., pi^{s-1}} when independent, else a
// deterministic greedy completion scanning codes upward. variant 1: greedy
// scan downward from the top code, giving a deliberately different basis for
// invariance tests.
SubfieldBasis make_basis(std::shared_ptr<const FieldCtx> ctx, std::int64_t d, int variant = 0);

// s x s symmetric matrix over F_{q0}, entries as field codes, row-major.
struct SymMatrix {
    std::int64_t s = 0;
    std::vector<gf_t> a;
    gf_t& at(std::int64_t i, std::int64_t j) { return a[i * s + j]; }
    gf_t at(std::int64_t i, std::int64_t j) const { return a[i * s + j]; }
};

struct RankProfile {
    int r = 0;     // rank over F_{q0}
    int disc = 1;  // eta0(a_1 ... a_r), +1 when r == 0
    bool operator==(const RankProfile& o) const { return r == o.r && disc == o.disc; }
};

// Matrix of the quadratic form X -> Tr^n_d(alpha x^{p^{3k}+1} + beta x^{p^k+1})
// in the given basis: h_ij = (1/2) Tr^n_d(alpha (v_i^{p^{3k}} v_j + v_i v_j^{p^{3k}})
//                                        + beta (v_i^{p^k} v_j + v_i v_j^{p^k})).
SymMatrix build_H(const ParamSet& par, const SubfieldBasis& basis, gf_t alpha, gf_t beta);

// Row vector of the linear form X -> Tr^n_d(gamma x): (Tr(gamma v_1), ...).
std::vector<gf_t> build_A(const SubfieldBasis& basis, gf_t gamma);

// Symmetric congruence diagonalization (odd characteristic): simultaneous
// row+column elimination; a zero diagonal pivot with a nonzero off-diagonal
// partner is repaired by x -> x + y before pivoting.
RankProfile diagonalize(const FieldCtx& ctx, std::int64_t d, SymMatrix H);

// Value of sum_X zeta^{Tr^d_1(X H X^T)} for an s-variable form over F_{q0}
// with the given rank profile:
//   eta0(Delta) q0^{s-r/2}        if q0 = 1 mod 4
//   i^r eta0(Delta) q0^{s-r/2}    if q0 = 3 mod 4
// materialized exactly in Z[zeta_p]; odd p-powers go through the directly
// summed Gauss sum over F_{q0} (gauss_sum(p,d)), never a hand-derived sign.
CycInt lemma1_sum(std::int64_t p, std::int64_t d, std::int64_t s, const RankProfile& prof);
CycInt lemma1_sum(const ParamSet& par, const RankProfile& prof);

// phi_{alpha,beta}(x) = alpha^{p^{3k}} x^{p^{6k}} + beta^{p^{3k}} x^{p^{4k}}
//                     + beta^{p^{2k}} x^{p^{2k}} + alpha x
gf_t phi_eval(const FieldCtx& ctx, const ParamSet& par, gf_t alpha, gf_t beta, gf_t x);

// The linearized map phi_{alpha,beta} as an F_{q0}-linear operator in a basis,
// row-reduced once so kernels and shifted solves are cheap.
class PhiMap {
public:
    PhiMap(const ParamSet& par, const SubfieldBasis& basis, gf_t alpha, gf_t beta);

    int kernel_dim() const { return w_; }
    const std::vector<gf_t>& kernel_elements() const { return kernel_; }
    // Some x0 with phi(x0) = -gamma, or nullopt when the shift misses the image.
    std::optional<gf_t> solve_shift(gf_t gamma) const;

private:
    const SubfieldBasis* basis_;
    std::int64_t s_;
    int w_ = 0;
    std::vector<gf_t> kernel_;
    // Row echelon data: E = T * M with M the matrix of phi (columns indexed by
    // source coordinates), pivot column per row, and the transform T.
    std::vector<gf_t> E_, T_;
    std::vector<int> pivot_col_;
    int rank_ = 0;
};

// Convenience wrappers matching the per-operation surface.
inline std::optional<gf_t> solve_shift(const ParamSet& par, const SubfieldBasis& basis, gf_t a, gf_t b,
                                       gf_t g) {
    return PhiMap(par, basis, a, b).solve_shift(g);
}

}  // namespace dosum
