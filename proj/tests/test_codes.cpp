#include <doctest.h>

#include <numeric>
#include <random>

#include "dosum/checks.hpp"
#include "dosum/codes.hpp"

using namespace dosum;

namespace {
Sums make_sums(std::int64_t p, std::int64_t n, std::int64_t k, std::int64_t t) {
    return Sums(FieldCtx::get(p, n), derive_params(p, n, k, t));
}

// Polynomial division over F_p for the divisibility oracle (coefficients as
// prime-field integers, ascending).
bool divides_exactly(std::vector<int> num, const std::vector<int>& den, int p) {
    auto inv = [&](int v) {
        int r = 1, x = v % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * x % p;
            x = x * x % p;
            e >>= 1;
        }
        return r;
    };
    int lead_inv = inv(den.back());
    while (num.size() >= den.size()) {
        int c = num.back() * lead_inv % p;
        std::size_t off = num.size() - den.size();
        for (std::size_t i = 0; i < den.size(); ++i)
            num[off + i] = ((num[off + i] - c * den[i]) % p + p) % p;
        while (!num.empty() && num.back() == 0) num.pop_back();
        if (num.empty()) return true;
    }
    return num.empty();
}
}  // namespace

TEST_SUITE("codes") {

TEST_CASE("minimal polynomials at (3,3,1,1)") {
    Sums sums = make_sums(3, 3, 1, 1);
    const FieldCtx& ctx = sums.ctx();
    const ParamSet& par = sums.par();

    auto h1 = minimal_poly(ctx, par, 1);
    auto h2 = minimal_poly(ctx, par, 4);
    auto h3 = minimal_poly(ctx, par, 28 % 26);
    CHECK(h1.size() == 4);  // degree n0 = 3
    CHECK(h2.size() == 4);
    CHECK(h3.size() == 4);
    CHECK_THROWS_AS(minimal_poly(ctx, par, 0), ValidationError);
    CHECK_THROWS_AS(minimal_poly(ctx, par, 26), ValidationError);

    // h1 h2 h3 divides x^26 - 1 over F_3, by exact division
    auto to_int = [&](const std::vector<gf_t>& poly) {
        std::vector<int> out;
        for (gf_t c : poly) {
            REQUIRE(c < 3);  // t = 1 coefficients are prime-field digits
            out.push_back(static_cast<int>(c));
        }
        return out;
    };
    std::vector<int> prod{1};
    for (const auto& h : {h1, h2, h3}) {
        auto hi = to_int(h);
        std::vector<int> next(prod.size() + hi.size() - 1, 0);
        for (std::size_t i = 0; i < prod.size(); ++i)
            for (std::size_t j = 0; j < hi.size(); ++j)
                next[i + j] = (next[i + j] + prod[i] * hi[j]) % 3;
        prod = std::move(next);
    }
    std::vector<int> x26(27, 0);
    x26[0] = 2;  // -1
    x26[26] = 1;
    CHECK(divides_exactly(x26, prod, 3));
}

TEST_CASE("code dimensions and fibers") {
    CHECK(build_code(make_sums(3, 3, 1, 1), CodeId::C1).dim == 6);
    CHECK(build_code(make_sums(3, 3, 1, 1), CodeId::C2).dim == 9);
    CHECK(build_code(make_sums(5, 3, 1, 1), CodeId::C1).dim == 6);
    CHECK(build_code(make_sums(3, 6, 2, 2), CodeId::C1).dim == 6);   // 2 n0, n0 = 3 over F_9

    // k = n/6: C1 shrinks to 3 n0 / 2 and messages cover each codeword 27 times
    CodeSpec k6c1 = build_code(make_sums(3, 6, 1, 1), CodeId::C1);
    CHECK(k6c1.dim == 9);
    CHECK(k6c1.fiber == 27);
    CodeSpec k6c2 = build_code(make_sums(3, 6, 1, 1), CodeId::C2);
    CHECK(k6c2.dim == 15);  // 5 n0 / 2
    CHECK(k6c2.fiber == 27);

    // the punctured-code arithmetic: gcd(q-1, p^k+1) is p^d+1 when d'=2d, else 2
    for (auto [p, n, k] : {std::tuple<int, int, int>{3, 8, 1}, {3, 6, 1}, {3, 10, 1}}) {
        ParamSet par = derive_params(p, n, k, 1);
        CHECK(std::gcd(par.q - 1, ipow_checked(p, k) + 1) == par.q0 + 1);
    }
    for (auto [p, n, k] : {std::tuple<int, int, int>{3, 3, 1}, {3, 5, 1}, {5, 3, 1}, {3, 6, 2}}) {
        ParamSet par = derive_params(p, n, k, 1);
        CHECK(std::gcd(par.q - 1, ipow_checked(p, k) + 1) == 2);
    }
}

TEST_CASE("codeword weights: oracle routes agree, exhaustive at (3,3,1,1)") {
    Sums sums = make_sums(3, 3, 1, 1);
    CHECK(codeword_weight(sums, CodeId::C1, 0, 0) == 0);
    CHECK(weight_from_sums(sums, CodeId::C1, 0, 0) == 0);
    for (std::int64_t ab = 0; ab < 27 * 27; ++ab) {
        gf_t a = static_cast<gf_t>(ab / 27), b = static_cast<gf_t>(ab % 27);
        std::int64_t w = codeword_weight(sums, CodeId::C1, a, b);
        REQUIRE(w == weight_from_sums(sums, CodeId::C1, a, b));
        if (ab != 0) REQUIRE((w == 12 || w == 18 || w == 24));
    }
    for (std::int64_t abg = 0; abg < 27 * 27 * 27; ++abg) {
        gf_t a = static_cast<gf_t>(abg / 729), b = static_cast<gf_t>((abg / 27) % 27);
        gf_t g = static_cast<gf_t>(abg % 27);
        REQUIRE(codeword_weight(sums, CodeId::C2, a, b, g) ==
                weight_from_sums(sums, CodeId::C2, a, b, g));
    }
}

TEST_CASE("codeword weights agree on samples at (3,6,2,t)") {
    for (std::int64_t t : {1, 2}) {
        Sums sums = make_sums(3, 6, 2, t);
        std::mt19937_64 rng(17);
        for (int i = 0; i < 150; ++i) {
            gf_t a = rng() % 729, b = rng() % 729, g = rng() % 729;
            CHECK(codeword_weight(sums, CodeId::C1, a, b) == weight_from_sums(sums, CodeId::C1, a, b));
            CHECK(codeword_weight(sums, CodeId::C2, a, b, g) ==
                  weight_from_sums(sums, CodeId::C2, a, b, g));
        }
    }
}

TEST_CASE("weight distributions at (3,3,1,1): frozen table, methods agree") {
    Sums sums = make_sums(3, 3, 1, 1);
    WeightTable en = weight_distribution(sums, CodeId::C1, WeightMethod::Enum, 2, default_budget());
    WeightTable fd = weight_distribution(sums, CodeId::C1, WeightMethod::FromDist, 2, default_budget());
    WeightTable th = theorem_c1_weights(sums.par());
    CHECK(en == fd);
    CHECK(en == th);
    REQUIRE(en.tally.size() == 4);
    CHECK(en.tally.at(0) == 1);
    CHECK(en.tally.at(12) == 156);
    CHECK(en.tally.at(18) == 494);
    CHECK(en.tally.at(24) == 78);
    CHECK(en.mass() == 729);

    WeightTable c2en = weight_distribution(sums, CodeId::C2, WeightMethod::Enum, 2, default_budget());
    WeightTable c2fd = weight_distribution(sums, CodeId::C2, WeightMethod::FromDist, 2, default_budget());
    WeightTable c2th = theorem_c2_weights(sums.par());
    CHECK(c2en == c2fd);
    CHECK(c2en == c2th);
    CHECK(c2en.mass() == big_pow(3, 9));
}

TEST_CASE("every closed-form weight table row exists in a C2 table") {
    // a weight (p^t-1) p^{n-t} row is present in every applicable instance
    for (auto [p, n, k, t] : {std::tuple<int, int, int, int>{3, 3, 1, 1}, {5, 3, 1, 1},
                              {3, 5, 1, 1}, {3, 6, 2, 1}, {3, 6, 2, 2}, {3, 8, 1, 1}}) {
        ParamSet par = derive_params(p, n, k, t);
        WeightTable th = theorem_c2_weights(par);
        std::int64_t w0 = (ipow_checked(p, t) - 1) * ipow_checked(p, n - t);
        CHECK(th.tally.count(w0) == 1);
        CHECK(th.tally.at(0) == 1);
        CHECK(th.mass() == big_pow(p, 3 * static_cast<std::int64_t>(n)));
    }
}

TEST_CASE("k of n/6 type: case dispatch and inapplicability") {
    Sums sums = make_sums(3, 6, 1, 1);
    WeightTable th = theorem_c1_weights(sums.par());
    REQUIRE(th.tally.size() == 4);
    CHECK(th.tally.at(0) == 1);
    CHECK(th.tally.at(648) == 182);
    CHECK(th.tally.at(432) == 5460);
    CHECK(th.tally.at(504) == 14040);
    WeightTable en = weight_distribution(sums, CodeId::C1, WeightMethod::Enum, 2, default_budget());
    CHECK(en == th);
    CHECK_THROWS_AS(theorem_c2_weights(sums.par()), InapplicableCase);
}

TEST_CASE("weight budget guard") {
    Sums sums = make_sums(3, 8, 1, 1);
    CHECK_THROWS_AS(weight_distribution(sums, CodeId::C2, WeightMethod::Enum, 2, 100000),
                    BudgetExceeded);
}

}  // TEST_SUITE
