#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "dosum/expsum.hpp"

namespace dosum {

enum class CodeId { C1, C2 };
enum class WeightMethod { Enum, FromDist };

// A cyclic code over F_{p^t} of length q-1 whose parity-check polynomial is
// the product of the minimal polynomials of pi^{-e} over the defining
// exponents e: {p^k+1, p^{3k}+1} for C1, plus e = 1 for C2.
struct CodeSpec {
    ParamSet par;
    CodeId which = CodeId::C1;
    std::int64_t length = 0;
    std::vector<std::int64_t> exponents;
    std::vector<std::vector<std::int64_t>> cosets;  // p^t-cyclotomic coset of -e mod q-1
    std::vector<std::vector<gf_t>> h;               // minimal polys, ascending coeffs in F_{p^t}
    std::int64_t dim = 0;                           // over F_{p^t}, from actual coset sizes
    BigInt codewords;                               // (p^t)^dim
    std::int64_t fiber = 1;                         // messages per codeword: q^u / (p^t)^dim

    nlohmann::json to_json(const FieldCtx& ctx) const;
};

// Minimal polynomial of pi^{-e} over F_{p^t}: expand prod (x - pi^{-e p^{tj}});
// every coefficient is checked to lie in F_{p^t}.
std::vector<gf_t> minimal_poly(const FieldCtx& ctx, const ParamSet& par, std::int64_t e);

CodeSpec build_code(const Sums& sums, CodeId which);

// Direct weight oracle: walk the codeword symbols
//   c_i = Tr^n_t(a pi^{(p^{3k}+1) i} + b pi^{(p^k+1) i} [+ g pi^i]).
std::int64_t codeword_weight(const Sums& sums, CodeId which, gf_t a, gf_t b, gf_t g = 0);

// Weight through the character-sum identity
//   w = (p^t-1) p^{n-t} - R / p^t,
// R summing T (resp. S) over the p^t-1 subfield scalings of the message.
std::int64_t weight_from_sums(const Sums& sums, CodeId which, gf_t a, gf_t b, gf_t g = 0);

WeightTable weight_distribution(const Sums& sums, CodeId which, WeightMethod method, int workers,
                                std::uint64_t budget);

// Closed-form weight distributions. theorem_c2_weights throws
// InapplicableCase when k is of n/6 type.
WeightTable theorem_c1_weights(const ParamSet& par);
WeightTable theorem_c2_weights(const ParamSet& par);

}  // namespace dosum
