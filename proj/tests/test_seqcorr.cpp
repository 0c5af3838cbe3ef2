#include <doctest.h>

#include <random>

#include "dosum/checks.hpp"
#include "dosum/seqcorr.hpp"

using namespace dosum;

namespace {
Sums make_sums(std::int64_t p, std::int64_t n, std::int64_t k, std::int64_t t) {
    return Sums(FieldCtx::get(p, n), derive_params(p, n, k, t));
}
}  // namespace

TEST_SUITE("seqcorr") {

TEST_CASE("sequence symbols") {
    Sums sums = make_sums(3, 3, 1, 1);
    const FieldCtx& F = sums.ctx();
    // the (0,0) member collapses to the m-sequence Tr(pi^lambda)
    for (std::int64_t lam = 0; lam < F.Q; ++lam)
        CHECK(seq_symbol(sums, 0, 0, lam) == F.trace1(F.from_log(static_cast<std::uint64_t>(lam))));
    // periodicity in lambda mod q-1
    std::mt19937_64 rng(18);
    for (int i = 0; i < 50; ++i) {
        gf_t a = rng() % 27, b = rng() % 27;
        std::int64_t lam = static_cast<std::int64_t>(rng() % 26);
        CHECK(seq_symbol(sums, a, b, lam) == seq_symbol(sums, a, b, lam + F.Q));
    }
    // direct evaluation of one symbol
    gf_t a = F.pi(), b = 1;
    std::int64_t lam = 5;
    gf_t val = F.add(F.mul(a, F.pow(F.pi(), lam * 28)),
                     F.add(F.mul(b, F.pow(F.pi(), lam * 4)), F.pow(F.pi(), lam)));
    CHECK(seq_symbol(sums, a, b, lam) == F.trace1(val));
}

TEST_CASE("zero-shift autocorrelation and the reduction identity") {
    Sums sums = make_sums(3, 5, 1, 1);
    std::mt19937_64 rng(19);
    CHECK(correlation(sums, 5, 7, 5, 7, 0) == CycInt::integer(3, sums.par().q - 1));
    // correlation() asserts the S-reduction on every call
    for (int i = 0; i < 40; ++i) {
        gf_t a1 = rng() % sums.par().q, b1 = rng() % sums.par().q;
        gf_t a2 = rng() % sums.par().q, b2 = rng() % sums.par().q;
        std::int64_t tau = static_cast<std::int64_t>(rng() % (sums.par().q - 1));
        CycInt m = correlation(sums, a1, b1, a2, b2, tau);
        // the correlation value plus one is an S value
        DistTable support = theorem_s_distribution(sums.par());
        CHECK(support.count_of(m + CycInt::integer(3, 1)) > 0);
    }
}

TEST_CASE("closed-form correlation table at (3,3,1): the printed rows verbatim") {
    ParamSet par = derive_params(3, 3, 1, 1);
    DistTable got = theorem_correlation_distribution(par);

    const std::int64_t p = 3, n = 3, d = 1;
    auto P = [&](std::int64_t e) { return big_pow(p, e); };
    const BigInt K = P(n) - P(n - d) - P(n - 2 * d) + 1;
    const CycInt one = CycInt::integer(3, 1);
    DistTable expect;
    auto add = [&](const CycInt& value, const BigInt& mult) { expect.add(value - one, mult); };

    for (int eps : {1, -1}) {
        // eps sqrt(p*) p^{(n-1)/2} - 1
        add(closed_value(p, ValueKind::SqrtPstarPower, eps, (n - 1) / 2),
            exact_div(P(2 * n + 2 * d) * (P(2 * n - 1) - 2 * P(n - 1) + 1) * K,
                      2 * (P(2 * d) - 1), "r1"));
        // eps p^{(n+d)/2} - 1
        add(closed_value(p, ValueKind::IntPower, eps, (n + d) / 2),
            exact_div(P((5 * n - d) / 2) * (P((n - d) / 2) + eps) *
                          (P((n - d) / 2 - 1) * (P((n - d) / 2) + eps * (p - 1)) * (P(n) - 2) + 1),
                      2, "r3"));
        // eps sqrt(p*) p^{(n+2d-1)/2} - 1
        add(closed_value(p, ValueKind::SqrtPstarPower, eps, (n + 2 * d - 1) / 2),
            exact_div(P(2 * n) * (P(2 * n - 2 * d - 1) - 2 * P(n - 2 * d - 1) + 1) * (P(n - d) - 1),
                      2 * (P(2 * d) - 1), "r5"));
        for (std::int64_t j = 1; j <= p - 1; ++j) {
            int leg = legendre(-j, p);
            add(closed_value(p, ValueKind::SqrtPstarPower, eps, (n - 1) / 2, j),
                exact_div(P(2 * n + 2 * d) * (P(n - 1) + eps * leg * P((n - 1) / 2)) * (P(n) - 2) * K,
                          2 * (P(2 * d) - 1), "r2"));
            add(closed_value(p, ValueKind::IntPower, eps, (n + d) / 2, j),
                exact_div(P(3 * n - d - 1) * (P((n - d) / 2) - eps) * (P((n - d) / 2) + eps) *
                              (P(n) - 2),
                          2, "r4"));
            add(closed_value(p, ValueKind::SqrtPstarPower, eps, (n + 2 * d - 1) / 2, j),
                exact_div(P(2 * n) * (P(n - 2 * d - 1) + eps * leg * P((n - 2 * d - 1) / 2)) *
                              (P(n) - 2) * (P(n - d) - 1),
                          2 * (P(2 * d) - 1), "r6"));
        }
    }
    add(CycInt::integer(3, 0),
        P(2 * n) * (P(n) - 2) * (P(2 * n - d) - P(2 * n - 2 * d) + P(2 * n - 3 * d) - P(n - 2 * d) + 1));
    add(CycInt::integer(3, P(n)), P(2 * n));

    CHECK(expect == got);
    CHECK(got.mass() == big_pow(p, 4 * n) * (P(n) - 1));
    CHECK(got.count_of(CycInt::integer(3, P(n) - 1)) == P(2 * n));  // the in-phase row
}

TEST_CASE("mixed enumeration equals the closed form at (3,3,1) and (5,3,1)") {
    for (auto [p, n] : {std::pair<std::int64_t, std::int64_t>{3, 3}, {5, 3}}) {
        Sums sums = make_sums(p, n, 1, 1);
        DistTable enumerated = correlation_distribution_enum(sums, 2, default_budget());
        CHECK(enumerated == theorem_correlation_distribution(sums.par()));
    }
}

TEST_CASE("literal correlations land in the table, sampled") {
    Sums sums = make_sums(3, 3, 1, 1);
    DistTable table = theorem_correlation_distribution(sums.par());
    std::mt19937_64 rng(20);
    for (int i = 0; i < 3000; ++i) {
        gf_t a1 = rng() % 27, b1 = rng() % 27, a2 = rng() % 27, b2 = rng() % 27;
        std::int64_t tau = static_cast<std::int64_t>(rng() % 26);
        CHECK(table.count_of(correlation(sums, a1, b1, a2, b2, tau)) > 0);
    }
}

TEST_CASE("the correlation table is inapplicable for k of n/6 type") {
    CHECK_THROWS_AS(theorem_correlation_distribution(derive_params(3, 6, 1, 1)), InapplicableCase);
}

TEST_CASE("the printed d'=d-even correlation rows 3 and 4 disagree with the mixing identity") {
    // At (3,6,2) the closed table comes out of the mixing identity. Two rows
    // of the printed even-case table do not: their exponents are off by the
    // amounts below. This pins the discrepancy so it stays visible.
    ParamSet par = derive_params(3, 6, 2, 1);
    DistTable got = theorem_correlation_distribution(par);
    const std::int64_t p = 3, n = 6, d = 2;
    auto P = [&](std::int64_t e) { return big_pow(p, e); };
    const CycInt one = CycInt::integer(3, 1);
    for (int eps : {1, -1}) {
        // row 3: printed inner factor p^{(n-d)/2}, mixing needs p^{(n-d)/2-1}
        CycInt key3 = closed_value(p, ValueKind::IntPower, eps, (n + d) / 2) - one;
        BigInt printed3 =
            exact_div(P((5 * n - d) / 2) * (P((n - d) / 2) + eps) *
                          (P((n - d) / 2) * (P((n - d) / 2) + eps * (p - 1)) * (P(n) - 2) + 1),
                      2, "printed r3");
        BigInt corrected3 =
            exact_div(P((5 * n - d) / 2) * (P((n - d) / 2) + eps) *
                          (P((n - d) / 2 - 1) * (P((n - d) / 2) + eps * (p - 1)) * (P(n) - 2) + 1),
                      2, "corrected r3");
        CHECK(got.count_of(key3) == corrected3);
        CHECK(got.count_of(key3) != printed3);
        for (std::int64_t j = 1; j <= p - 1; ++j) {
            // row 4: printed power p^{5n-d-1}, mixing needs p^{3n-d-1}
            CycInt key4 = closed_value(p, ValueKind::IntPower, eps, (n + d) / 2, j) - one;
            BigInt printed4 = exact_div(
                P(5 * n - d - 1) * (P((n - d) / 2) - eps) * (P((n - d) / 2) + eps) * (P(n) - 2), 2,
                "printed r4");
            BigInt corrected4 = exact_div(
                P(3 * n - d - 1) * (P((n - d) / 2) - eps) * (P((n - d) / 2) + eps) * (P(n) - 2), 2,
                "corrected r4");
            CHECK(got.count_of(key4) == corrected4);
            CHECK(got.count_of(key4) != printed4);
        }
    }
}

}  // TEST_SUITE
