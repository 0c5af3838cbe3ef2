#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dosum/errors.hpp"

namespace dosum {

// An element of F_{p^n}, encoded as the packed base-p digit string of its
// coordinates in the polynomial basis {1, pi, ..., pi^{n-1}}: digit i is the
// coefficient of pi^i, and the code is sum digit_i * p^i. Code 0 is the zero
// element, code 1 is one.
using gf_t = std::uint32_t;

inline constexpr std::uint32_t kLogZero = 0xffffffffu;   // log_ sentinel for 0
inline constexpr std::uint32_t kZechNeg = 0xffffffffu;   // zech_ sentinel for 1 + pi^e = 0

// A concrete realization of F_{p^n}. The modulus is the first monic primitive
// polynomial of degree n in increasing order of its packed coefficient code
// sum c_i p^i (constant term least significant), so every table is identical
// across runs and machines. pi is the residue of X and generates the
// multiplicative group.
//
// Immutable after construction; safe to share across threads.
class FieldCtx {
public:
    static constexpr std::int64_t kMaxQ = std::int64_t{1} << 26;

    // Cached factory. Throws NotOddPrime / TooLarge.
    static std::shared_ptr<const FieldCtx> get(std::int64_t p, std::int64_t n);

    std::int64_t p = 0, n = 0;
    std::int64_t q = 0;  // p^n
    std::int64_t Q = 0;  // q - 1

    // Monic modulus, constant term first; modulus[n] == 1.
    std::vector<int> modulus;

    gf_t pi() const { return exp_[1]; }
    gf_t one() const { return 1; }

    std::uint32_t log(gf_t x) const { return log_[x]; }
    gf_t from_log(std::uint64_t e) const { return exp_[e % static_cast<std::uint64_t>(Q)]; }

    gf_t add(gf_t a, gf_t b) const;
    gf_t neg(gf_t a) const;
    gf_t sub(gf_t a, gf_t b) const { return add(a, neg(b)); }
    gf_t mul(gf_t a, gf_t b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    gf_t inv(gf_t a) const;
    gf_t scalar(std::int64_t c) const;  // image of the integer c (element of the prime field)

    // x^e for e >= 0 (reduced mod Q for nonzero x).
    gf_t pow(gf_t x, std::int64_t e) const;
    // Frobenius x -> x^{p^j}; O(1) through the log tables.
    gf_t frob(gf_t x, std::int64_t j) const {
        if (x == 0) return 0;
        return exp_[static_cast<std::uint64_t>(log_[x]) * pj_mod_Q(j) % static_cast<std::uint64_t>(Q)];
    }

    // Tr^n_j : F_{p^n} -> F_{p^j} for j | n. Throws JNotDividingN.
    gf_t trace_to(gf_t x, std::int64_t j) const;
    // Tr^n_1 as an integer in [0, p), from the precomputed table.
    int trace1(gf_t x) const { return tr1_[x]; }
    // Tr^j_1 of an element of the subfield F_{p^j}, computed inside the
    // subfield (sum of the first j Frobenius images); an integer in [0, p).
    int subfield_trace1(gf_t u, std::int64_t j) const;

    bool in_subfield(gf_t x, std::int64_t j) const;
    // Quadratic character of x viewed in the subfield F_{p^j}; 0 iff x == 0.
    // Requires x in the subfield.
    int quad_char_sub(gf_t x, std::int64_t j) const;

    // Raw tables for sweep loops.
    const std::vector<gf_t>& exp_table() const { return exp_; }
    const std::vector<std::uint32_t>& log_table() const { return log_; }
    const std::vector<std::uint32_t>& zech_table() const { return zech_; }
    const std::vector<std::uint8_t>& tr1_table() const { return tr1_; }
    // Packed 4-bit-per-digit form for carry-free digit addition; empty when p > 7.
    const std::vector<std::uint64_t>& nibble_table() const { return nib_; }
    std::uint64_t pj_mod_Q(std::int64_t j) const { return pjq_[((j % n) + n) % n]; }

    static std::uint64_t nibble_add(std::uint64_t a, std::uint64_t b, int p);
    static int nibble_digit(std::uint64_t nib, int i) { return static_cast<int>((nib >> (4 * i)) & 0xf); }

private:
    FieldCtx() = default;
    void build(std::int64_t p, std::int64_t n);

    std::vector<gf_t> exp_;           // size 2Q; exp_[e] = pi^e, doubled so sums of two logs index directly
    std::vector<std::uint32_t> log_;  // size q
    std::vector<std::uint32_t> zech_; // size Q; log(1 + pi^e)
    std::vector<std::uint8_t> tr1_;   // size q
    std::vector<std::uint64_t> nib_;  // size q when p <= 7
    std::vector<std::uint64_t> pjq_;  // p^j mod Q for 0 <= j < n
};

}  // namespace dosum
