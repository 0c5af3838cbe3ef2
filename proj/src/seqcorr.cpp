#include "dosum/seqcorr.hpp"

namespace dosum {

namespace {
inline std::uint32_t mod_add(std::uint32_t a, std::uint32_t b, std::uint32_t Q) {
    std::uint32_t r = a + b;
    return r >= Q ? r - Q : r;
}
}  // namespace

int seq_symbol(const Sums& sums, gf_t alpha, gf_t beta, std::int64_t lambda) {
    const FieldCtx& F = sums.ctx();
    const std::int64_t Q = F.Q;
    lambda = ((lambda % Q) + Q) % Q;
    const auto& t3 = sums.term3_log();
    const auto& t1 = sums.term1_log();
    const auto& tr1 = sums.tr1_of_log();
    int c = tr1[lambda];  // the m-sequence term pi^lambda
    if (alpha != 0) c += tr1[mod_add(F.log(alpha), t3[lambda], static_cast<std::uint32_t>(Q))];
    if (beta != 0) c += tr1[mod_add(F.log(beta), t1[lambda], static_cast<std::uint32_t>(Q))];
    return c % static_cast<int>(sums.par().p);
}

CycInt correlation(const Sums& sums, gf_t a1, gf_t b1, gf_t a2, gf_t b2, std::int64_t tau) {
    const FieldCtx& F = sums.ctx();
    const ParamSet& par = sums.par();
    const std::int64_t Q = F.Q, p = par.p;
    tau = ((tau % Q) + Q) % Q;

    std::vector<std::int64_t> cnt(static_cast<std::size_t>(p), 0);
    for (std::int64_t lam = 0; lam < Q; ++lam) {
        int diff = seq_symbol(sums, a1, b1, lam) - seq_symbol(sums, a2, b2, lam + tau);
        cnt[((diff % p) + p) % p] += 1;
    }
    std::vector<BigInt> raw(static_cast<std::size_t>(p));
    for (std::int64_t c = 0; c < p; ++c) raw[c] = cnt[c];
    CycInt literal = CycInt::canon(static_cast<int>(p), raw);

    // reduction M = S(a', b', g') - 1
    gf_t pow3 = F.exp_table()[sums.term3_log()[tau]];
    gf_t pow1 = F.exp_table()[sums.term1_log()[tau]];
    gf_t ap = F.sub(a1, F.mul(a2, pow3));
    gf_t bp = F.sub(b1, F.mul(b2, pow1));
    gf_t gp = F.sub(1, F.exp_table()[tau]);
    CycInt reduced = sums.s_fast(ap, bp, gp) - CycInt::integer(static_cast<int>(p), 1);
    if (literal != reduced)
        throw InternalCheckFailure("correlation reduction identity failed");
    return literal;
}

DistTable correlation_mix(const ParamSet& par, const DistTable& sdist, const DistTable& tdist) {
    const std::int64_t q = par.q;
    const BigInt p2n = big_pow(par.p, 2 * par.n);
    const CycInt one = CycInt::integer(static_cast<int>(par.p), 1);
    DistTable out;
    for (const auto& [kappa, s_count] : sdist.tally) {
        BigInt t_count = tdist.count_of(kappa);
        BigInt num = BigInt(q - 2) * s_count + t_count;
        // (q-1) | (s_kappa - t_kappa): gamma != 0 tallies are gamma independent
        BigInt m = p2n * exact_div(num, q - 1, "correlation mixing divisibility");
        out.add(kappa - one, m);
    }
    for (const auto& [kappa, t_count] : tdist.tally)
        if (sdist.count_of(kappa) == 0)
            throw InternalCheckFailure("T-value missing from the S-distribution support");
    BigInt expect = big_pow(par.p, 4 * par.n) * (q - 1);
    if (out.mass() != expect) throw InternalCheckFailure("correlation mass differs from p^{4n}(q-1)");
    return out;
}

DistTable theorem_correlation_distribution(const ParamSet& par) {
    if (par.k_sixth)
        throw InapplicableCase("the correlation table requires k not of n/6 type");
    return correlation_mix(par, theorem_s_distribution(par), theorem_t_distribution(par));
}

DistTable correlation_distribution_enum(const Sums& sums, int workers, std::uint64_t budget) {
    DistTable sdist = sums.s_distribution(SDistMethod::PairSweep, workers, budget);
    DistTable tdist = sums.t_distribution(TDistMethod::Fast, workers, budget);
    return correlation_mix(sums.par(), sdist, tdist);
}

}  // namespace dosum
