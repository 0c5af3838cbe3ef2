#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "dosum/errors.hpp"

namespace dosum {

// Which of the three structural cases an instance falls into:
//   DOdd : gcd(n,2k) = gcd(n,k) and n odd
//   DEven: gcd(n,2k) = gcd(n,k) and n even
//   DD   : gcd(n,2k) = 2 gcd(n,k)   (equivalently n/d even)
enum class CaseTag { DOdd, DEven, DD };

const char* to_string(CaseTag tag);

// Validated instance (p,n,k,t) together with every derived quantity the
// library needs. Immutable after derive_params.
struct ParamSet {
    std::int64_t p = 0;  // odd prime
    std::int64_t n = 0;  // extension degree, >= 2
    std::int64_t k = 0;  // exponent parameter, 1 <= k <= n-1, k not in {n/4, n/2, 3n/4}
    std::int64_t t = 0;  // code alphabet degree, t | d

    std::int64_t d = 0;       // gcd(n,k)
    std::int64_t dprime = 0;  // gcd(n,2k), equals d or 2d
    std::int64_t s = 0;       // n/d
    std::int64_t q0 = 0;      // p^d
    std::int64_t q = 0;       // p^n
    std::int64_t n0 = 0;      // n/t
    std::int64_t m = -1;      // n/2 when n even, else -1
    int mu = 0;               // (-1)^(m/d) when dprime == 2d, else 0
    CaseTag case_tag = CaseTag::DOdd;

    bool k_sixth = false;  // k in {n/6, 5n/6}

    // Highest weight-table rank deficiencies possible for nonzero pairs:
    // {0,1,2} when dprime == d, {0,2,4,6} when dprime == 2d.
    std::vector<int> rank_deficits() const {
        if (dprime == 2 * d) return {0, 2, 4, 6};
        return {0, 1, 2};
    }

    nlohmann::json to_json() const;
    static ParamSet from_json(const nlohmann::json& j);
};

// Validates and derives. Throws NotOddPrime, ExcludedK, TNotDividingD,
// ValidationError (range), TooLarge (p^n over 2^62).
ParamSet derive_params(std::int64_t p, std::int64_t n, std::int64_t k, std::int64_t t);

}  // namespace dosum
