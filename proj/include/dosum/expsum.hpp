#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "dosum/dist.hpp"
#include "dosum/quadform.hpp"

namespace dosum {

enum class TDistMethod { Oracle, Fast };
enum class SDistMethod { Oracle, PairSweep };

struct MomentReport {
    CycInt m1, m2, m3;          // exact power sums from the tally (m3 only when third_checked)
    BigInt expect1, expect2, expect3;
    bool third_checked = false; // third moment is only pinned when dprime == 2d
    bool ok1 = false, ok2 = false, ok3 = true;
    bool all_ok() const { return ok1 && ok2 && ok3; }
    MomentReport(int p) : m1(p), m2(p), m3(p) {}
};

struct MomentSystemCounts {
    BigInt M2;      // solutions of x^{p^{3k}+1}+y^{p^{3k}+1} = x^{p^k+1}+y^{p^k+1} = 0
    BigInt Tprime;  // solutions of the same system with +1 on both left sides
    BigInt M3;      // M2 + Tprime (q-1)
};

// Evaluation engine for the exponential sums
//   T(a,b)   = sum_x zeta^{Tr(a x^{p^{3k}+1} + b x^{p^k+1})}
//   S(a,b,g) = sum_x zeta^{Tr(a x^{p^{3k}+1} + b x^{p^k+1} + g x)}
// holding the per-instance lookup tables shared by all sweeps. Immutable
// after construction; all methods are const and thread-safe.
class Sums {
public:
    Sums(std::shared_ptr<const FieldCtx> ctx, ParamSet par);

    const FieldCtx& ctx() const { return *ctx_; }
    const ParamSet& par() const { return par_; }
    const SubfieldBasis& basis() const { return basis_; }

    // f_{a,b}(x) and the exponents as residues mod q-1 for power walks.
    gf_t f_ab(gf_t a, gf_t b, gf_t x) const;
    std::int64_t exp3_mod() const { return e3_mod_; }  // (p^{3k}+1) mod (q-1)
    std::int64_t exp1_mod() const { return e1_mod_; }  // (p^k+1) mod (q-1)

    CycInt t_oracle(gf_t a, gf_t b) const;
    CycInt t_fast(gf_t a, gf_t b) const;
    CycInt s_oracle(gf_t a, gf_t b, gf_t g) const;
    CycInt s_fast(gf_t a, gf_t b, gf_t g) const;

    // Internal pair classification: 0 is the zero pair; other ids identify the
    // T-value class (kernel dimension when d'=2d, rank+discriminant when d'=d).
    int pair_class(gf_t a, gf_t b) const;
    int class_count() const;
    const CycInt& class_value(int cid) const;
    int class_deficit(int cid) const;    // i with rank = s - i  (-1 for the zero pair)
    int class_eps(int cid) const;        // sign of T against the +1 closed value
    int kernel_dim_of_class(int cid) const;

    DistTable t_distribution(TDistMethod method, int workers, std::uint64_t budget) const;
    DistTable s_distribution(SDistMethod method, int workers, std::uint64_t budget) const;

    MomentSystemCounts moment_system_counts(int workers, std::uint64_t budget) const;

    // Affine point count of a x^{p^{3k}+1} + b x^{p^k+1} = y^{p^d} - y, by
    // direct per-x root counting; asserts N = q + (p^d-1) T(a,b).
    // Requires d' = 2d.
    std::int64_t artin_count(gf_t a, gf_t b) const;

    // Number of gamma with phi_{a,b}(x) + gamma = 0 solvable and
    // Tr^n_t(f_{a,b}(x0)) = a_sub, by full gamma sweep (oracle route).
    std::int64_t count_gamma(gf_t a, gf_t b, gf_t a_sub) const;

    // Subfield F_{p^t} bookkeeping shared with the code sweeps:
    // index 0 is zero, index 1+j is pi^{j (q-1)/(p^t-1)}.
    int subfield_order() const { return static_cast<int>(pt_); }
    gf_t subfield_element(int idx) const { return sub_elems_[idx]; }
    int subfield_index(gf_t x) const;
    int subfield_add_idx(int i, int j) const { return sub_add_[i * pt_ + j]; }
    int theta_index(gf_t a, gf_t b, gf_t x) const;   // index of Tr^n_t(f_{a,b}(x))

    // log-domain tables for sweep loops
    const std::vector<std::uint32_t>& term3_log() const { return term3_log_; }
    const std::vector<std::uint32_t>& term1_log() const { return term1_log_; }
    const std::vector<std::uint8_t>& tr1_of_log() const { return tr1_log_; }
    const std::vector<std::uint8_t>& trt_idx_of_log() const { return trt_log_; }

    PhiMap phi(gf_t a, gf_t b) const { return PhiMap(par_, basis_, a, b); }
    RankProfile rank_profile(gf_t a, gf_t b) const;  // via H + diagonalize
    SymMatrix H(gf_t a, gf_t b) const;

    // Kernel dimension of phi_{a,b}; digit fast path when d = 1.
    int kernel_dim(gf_t a, gf_t b) const;

private:
    void build_classes();
    int class_of_rank(int r, int disc) const;
    int class_of_kernel(int w) const;

    std::shared_ptr<const FieldCtx> ctx_;
    ParamSet par_;
    SubfieldBasis basis_;

    std::int64_t e3_mod_ = 0, e1_mod_ = 0;
    std::vector<std::uint32_t> term3_log_, term1_log_;  // (e * exp) mod Q per log e
    std::vector<std::uint8_t> tr1_log_;                 // Tr^n_1(pi^e)
    std::vector<std::uint8_t> trt_log_;                 // subfield index of Tr^n_t(pi^e)

    // basis images for phi columns: v_j^{p^{6k}}, v_j^{p^{4k}}, v_j^{p^{2k}}
    std::vector<gf_t> f6_, f4_, f2_;
    bool digit_coords_ = false;  // d == 1 and polynomial basis: coordinates are digits

    // H-builder caches: A_ij = v_i^{p^{3k}} v_j + v_i v_j^{p^{3k}}, B_ij likewise for p^k
    std::vector<gf_t> hA_, hB_;
    gf_t half_ = 0;                 // inverse of 2
    std::vector<gf_t> trd_table_;   // Tr^n_d per code

    std::int64_t pt_ = 0;  // p^t
    std::vector<gf_t> sub_elems_;
    std::vector<std::uint8_t> sub_add_;

    std::vector<CycInt> class_values_;
    std::vector<int> class_deficit_, class_eps_;
};

// Closed-form value distribution of { T(a,b) : (a,b) in F_q^2 }.
DistTable theorem_t_distribution(const ParamSet& par);

// Closed-form value distribution of { S(a,b,g) : (a,b,g) in F_q^3 }, composed
// from the T table and the per-class gamma counts.
DistTable theorem_s_distribution(const ParamSet& par);

// Class sizes n_{i,eps} used by every closed-form table: the number of
// nonzero pairs with rank deficit i and sign eps.
BigInt pair_class_size(const ParamSet& par, int i, int eps);

// Closed-form count of gamma satisfying the solvable-shift conditions with
// Tr^n_t(f(x0)) of quadratic class a_class (0 for a = 0, else eta'(a) = +-1),
// for a pair of deficit i and sign eps. t defaults to par.t.
BigInt count_gamma_theorem(const ParamSet& par, int i, int eps, int a_class, std::int64_t t = 0);

MomentReport moments(const ParamSet& par, const DistTable& tdist);

}  // namespace dosum
