#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "dosum/errors.hpp"

namespace dosum {

// All tallies, multiplicities and cyclotomic coefficients are exact.
using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_pow(std::int64_t base, std::int64_t e) {
    if (e < 0) throw InternalCheckFailure("big_pow: negative exponent");
    BigInt r = 1, b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// Division that must be exact; a remainder indicates a broken identity.
inline BigInt exact_div(const BigInt& a, const BigInt& b, const char* what = "exact_div") {
    if (b == 0) throw InternalCheckFailure(std::string(what) + ": division by zero");
    BigInt q = a / b, r = a % b;
    if (r != 0) throw InternalCheckFailure(std::string(what) + ": not divisible: " + a.str() + " / " + b.str());
    return q;
}

// p^e for small results, with overflow guard.
inline std::int64_t ipow_checked(std::int64_t base, std::int64_t e, const char* what = "ipow") {
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < e; ++i) {
        if (r > (std::int64_t{1} << 62) / base) throw TooLarge(std::string(what) + ": power exceeds 2^62");
        r *= base;
    }
    return r;
}

inline bool is_prime_u64(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

// Legendre symbol on F_p (p odd prime), a need not be reduced.
inline int legendre(std::int64_t a, std::int64_t p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    std::int64_t r = 1, b = a, e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

}  // namespace dosum
