#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "dosum/ints.hpp"

namespace dosum {

// An element of Z[zeta_p] in the canonical basis {1, zeta, ..., zeta^{p-2}}.
// zeta^{p-1} is always rewritten as -(1 + zeta + ... + zeta^{p-2}), so ring
// equality is coefficient-list equality and map keys are well defined.
class CycInt {
public:
    explicit CycInt(int p) : p_(p), c_(static_cast<std::size_t>(p - 1)) {}

    static CycInt integer(int p, BigInt v);
    static CycInt zeta_pow(int p, std::int64_t j);  // zeta^j, canonical
    // Reduce a raw tally over exponents 0..p-1 using sum_j zeta^j = 0.
    static CycInt canon(int p, const std::vector<BigInt>& raw);

    int p() const { return p_; }
    const std::vector<BigInt>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_rational() const;          // c_j == 0 for all j >= 1
    const BigInt& rational() const;    // requires is_rational()

    CycInt operator+(const CycInt& o) const;
    CycInt operator-(const CycInt& o) const;
    CycInt operator*(const CycInt& o) const;
    CycInt operator-() const;
    CycInt scaled(const BigInt& f) const;
    CycInt times_zeta(std::int64_t j) const;  // multiply by zeta^j

    bool operator==(const CycInt& o) const { return p_ == o.p_ && c_ == o.c_; }
    bool operator!=(const CycInt& o) const { return !(*this == o); }
    // Canonical total order: by p, then lexicographic on coefficients.
    bool operator<(const CycInt& o) const;

    std::string str() const;
    std::complex<long double> embed() const;  // value at zeta = e^{2 pi i / p}

    nlohmann::json to_json() const;
    static CycInt from_json(const nlohmann::json& j);

private:
    void check_same(const CycInt& o) const;
    int p_;
    std::vector<BigInt> c_;
};

// G(eta', chi') = sum_{x in F_{p^t}^*} eta'(x) zeta^{Tr^t_1(x)}, computed by
// direct summation; its square is (-1)^{(p^t-1)/2} p^t. Cached per (p,t).
const CycInt& gauss_sum(std::int64_t p, std::int64_t t);

enum class ValueKind { IntPower, SqrtPstarPower };

// eps * p^e           (IntPower)
// eps * p^e * G(p,1)  (SqrtPstarPower, i.e. an exact eps * sqrt(p*) p^e)
// optionally times zeta^j. Every closed-form table value goes through here.
CycInt closed_value(std::int64_t p, ValueKind kind, int eps, std::int64_t e, std::int64_t j = 0);

}  // namespace dosum
