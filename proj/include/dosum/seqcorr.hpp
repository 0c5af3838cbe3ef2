#pragma once

#include <cstdint>

#include "dosum/expsum.hpp"

namespace dosum {

// Symbol lambda of the sequence a_{alpha,beta}:
//   Tr^n_1(alpha pi^{lambda(p^{3k}+1)} + beta pi^{lambda(p^k+1)} + pi^lambda).
int seq_symbol(const Sums& sums, gf_t alpha, gf_t beta, std::int64_t lambda);

// Correlation of a_{a1,b1} against a_{a2,b2} shifted by tau, computed by the
// literal length-(q-1) sum. Also evaluates the reduction
//   M = S(a', b', g') - 1,  a' = a1 - a2 pi^{tau(p^{3k}+1)},
//   b' = b1 - b2 pi^{tau(p^k+1)}, g' = 1 - pi^tau,
// and asserts the two routes agree.
CycInt correlation(const Sums& sums, gf_t a1, gf_t b1, gf_t a2, gf_t b2, std::int64_t tau);

// Exact correlation tally over all (id1, id2, tau) from S- and T-tallies via
//   M_kappa = p^{2n} ((q-2) s_kappa + t_kappa) / (q-1),
// keys shifted by -1. Divisibility is asserted (it encodes the gamma
// independence of the S-tally).
DistTable correlation_mix(const ParamSet& par, const DistTable& sdist, const DistTable& tdist);

// Closed form: the mix of the two closed-form tables. Requires k not of
// n/6 type (InapplicableCase otherwise).
DistTable theorem_correlation_distribution(const ParamSet& par);

// Enumerated route: mixes enumerated S- and T-distributions.
DistTable correlation_distribution_enum(const Sums& sums, int workers, std::uint64_t budget);

}  // namespace dosum
