#include "dosum/params.hpp"

#include <numeric>

#include "dosum/ints.hpp"

namespace dosum {

const char* to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::DOdd: return "D_ODD";
        case CaseTag::DEven: return "D_EVEN";
        case CaseTag::DD: return "DD";
    }
    return "?";
}

ParamSet derive_params(std::int64_t p, std::int64_t n, std::int64_t k, std::int64_t t) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64(static_cast<std::uint64_t>(p)))
        throw NotOddPrime("p must be an odd prime, got " + std::to_string(p));
    if (n < 2) throw ValidationError("n must be at least 2");
    if (k < 1 || k > n - 1) throw ValidationError("k must satisfy 1 <= k <= n-1");
    if (4 * k == n || 2 * k == n || 4 * k == 3 * n)
        throw ExcludedK("k in {n/4, n/2, 3n/4} is excluded");
    if (t < 1) throw ValidationError("t must be positive");

    ParamSet ps;
    ps.p = p;
    ps.n = n;
    ps.k = k;
    ps.t = t;
    ps.d = std::gcd(n, k);
    ps.dprime = std::gcd(n, 2 * k);
    ps.s = n / ps.d;
    if (ps.d % t != 0) throw TNotDividingD("t must divide d = gcd(n,k)");
    ps.q0 = ipow_checked(p, ps.d, "q0");
    ps.q = ipow_checked(p, n, "q");
    ps.n0 = n / t;
    ps.m = (n % 2 == 0) ? n / 2 : -1;

    if (ps.dprime == 2 * ps.d) {
        ps.case_tag = CaseTag::DD;
        // n/d even forces n even here
        ps.mu = ((ps.m / ps.d) % 2 == 0) ? 1 : -1;
    } else {
        ps.case_tag = (n % 2 == 1) ? CaseTag::DOdd : CaseTag::DEven;
        ps.mu = 0;
    }
    // structural sanity: d' = 2d iff n/d even, and then k/d is odd
    bool nd_even = (ps.s % 2 == 0);
    if (nd_even != (ps.dprime == 2 * ps.d))
        throw InternalCheckFailure("d' dichotomy violated");
    if (ps.dprime == 2 * ps.d && (k / ps.d) % 2 == 0)
        throw InternalCheckFailure("k/d must be odd when d' = 2d");

    ps.k_sixth = (6 * k == n) || (6 * k == 5 * n);
    return ps;
}

nlohmann::json ParamSet::to_json() const {
    nlohmann::json j;
    j["p"] = p;
    j["n"] = n;
    j["k"] = k;
    j["t"] = t;
    nlohmann::json der;
    der["d"] = d;
    der["dprime"] = dprime;
    der["s"] = s;
    der["q0"] = q0;
    der["q"] = q;
    der["n0"] = n0;
    if (m >= 0) der["m"] = m;
    if (mu != 0) der["mu"] = mu;
    der["case"] = to_string(case_tag);
    der["k_sixth"] = k_sixth;
    j["derived"] = der;
    return j;
}

ParamSet ParamSet::from_json(const nlohmann::json& j) {
    return derive_params(j.at("p").get<std::int64_t>(), j.at("n").get<std::int64_t>(),
                         j.at("k").get<std::int64_t>(), j.at("t").get<std::int64_t>());
}

}  // namespace dosum
