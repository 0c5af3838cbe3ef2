#include <doctest.h>

#include <random>

#include "dosum/field.hpp"
#include "dosum/ints.hpp"

using namespace dosum;

namespace {

// Independent mini model of F_p[X]/(M): coefficient vectors multiplied the
// long way, used to cross-check the modulus search.
std::vector<int> ref_mul(const std::vector<int>& a, const std::vector<int>& b,
                         const std::vector<int>& mod, int p) {
    std::vector<int> acc(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + a[i] * b[j]) % p;
    std::size_t deg = mod.size() - 1;
    for (std::size_t i = acc.size(); i-- > deg;) {
        int c = acc[i];
        if (c == 0) continue;
        acc[i] = 0;
        for (std::size_t j = 0; j < deg; ++j)
            acc[i - deg + j] = ((acc[i - deg + j] - c * mod[j]) % p + p) % p;
    }
    acc.resize(deg);
    return acc;
}

int x_order(const std::vector<int>& mod, int p, std::int64_t q) {
    std::vector<int> x(mod.size() - 1, 0);
    if (x.size() > 1) x[1] = 1;
    else x[0] = ((-mod[0]) % p + p) % p;  // degree 1: X = -c0
    std::vector<int> cur = x;
    std::vector<int> one(mod.size() - 1, 0);
    one[0] = 1;
    for (int e = 1; e <= q - 1; ++e) {
        if (cur == one) return e;
        cur = ref_mul(cur, x, mod, p);
    }
    return 0;
}

}  // namespace

TEST_SUITE("field") {

TEST_CASE("degree one and two realizations") {
    auto f3 = FieldCtx::get(3, 1);
    CHECK(f3->pi() == 2);  // X + 1 is the first primitive modulus, pi = -1 = 2
    CHECK(f3->mul(2, 2) == 1);
    CHECK(f3->add(1, 2) == 0);

    auto f9 = FieldCtx::get(3, 2);
    CHECK(f9->pow(f9->pi(), 8) == 1);
    CHECK(f9->pow(f9->pi(), 4) != 1);
    CHECK(f9->trace_to(1, 1) == 2);  // 1 + 1 in characteristic 3
}

TEST_CASE("the (3,3) modulus is the first primitive one in packed order") {
    auto ctx = FieldCtx::get(3, 3);
    // independent exhaustive search with the reference arithmetic
    std::vector<int> found;
    for (int code = 0; code < 27 && found.empty(); ++code) {
        std::vector<int> cand{code % 3, (code / 3) % 3, (code / 9) % 3, 1};
        if (x_order(cand, 3, 27) == 26) found = cand;
    }
    REQUIRE_FALSE(found.empty());
    CHECK(ctx->modulus == found);
    CHECK(x_order(ctx->modulus, 3, 27) == 26);
}

TEST_CASE("trace examples and transitivity") {
    auto f27 = FieldCtx::get(3, 3);
    // Tr^n_n is the identity
    for (std::int64_t x = 0; x < 27; ++x) CHECK(f27->trace_to(static_cast<gf_t>(x), 3) == x);
    // direct power sum for Tr(pi)
    gf_t pi = f27->pi();
    gf_t direct = f27->add(pi, f27->add(f27->pow(pi, 3), f27->pow(pi, 9)));
    CHECK(f27->trace_to(pi, 1) == direct);
    CHECK(f27->trace1(pi) == static_cast<int>(direct));

    // transitivity Tr^{j'}_j(Tr^n_{j'}(x)) = Tr^n_j(x), exhaustive at q = 3^6
    auto f729 = FieldCtx::get(3, 6);
    for (std::int64_t j : {1, 2, 3}) {
        for (std::int64_t jp : {2, 3, 6}) {
            if (jp % j != 0 || 6 % jp != 0) continue;
            for (std::int64_t x = 0; x < 729; ++x) {
                gf_t inner = f729->trace_to(static_cast<gf_t>(x), jp);
                // relative trace from F_{3^jp} down to F_{3^j}, inside the big field
                gf_t acc = 0, cur = inner;
                for (std::int64_t i = 0; i < jp / j; ++i) {
                    acc = f729->add(acc, cur);
                    cur = f729->frob(cur, j);
                }
                CHECK(acc == f729->trace_to(static_cast<gf_t>(x), j));
            }
        }
    }
    CHECK_THROWS_AS(f729->trace_to(1, 4), JNotDividingN);
}

TEST_CASE("trace is F_p-linear") {
    auto ctx = FieldCtx::get(3, 5);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        gf_t x = rng() % ctx->q, y = rng() % ctx->q;
        CHECK(ctx->trace1(ctx->add(x, y)) == (ctx->trace1(x) + ctx->trace1(y)) % 3);
    }
}

TEST_CASE("quadratic character") {
    auto f3 = FieldCtx::get(3, 1);
    CHECK(f3->quad_char_sub(1, 1) == 1);
    CHECK(f3->quad_char_sub(0, 1) == 0);
    CHECK(f3->quad_char_sub(2, 1) == -1);  // squares in F_3 are {0,1}

    // multiplicativity on F_9* inside F_81, and x^((|F|-1)/2) agreement
    auto ctx = FieldCtx::get(3, 4);
    std::vector<gf_t> sub;
    for (std::int64_t x = 1; x < ctx->q; ++x)
        if (ctx->in_subfield(static_cast<gf_t>(x), 2)) sub.push_back(static_cast<gf_t>(x));
    CHECK(sub.size() == 8);
    for (gf_t x : sub) {
        gf_t pw = ctx->pow(x, (9 - 1) / 2);
        int eta = ctx->quad_char_sub(x, 2);
        CHECK(((pw == 1 && eta == 1) || (pw == ctx->neg(1) && eta == -1)));
        for (gf_t y : sub)
            CHECK(ctx->quad_char_sub(ctx->mul(x, y), 2) ==
                  ctx->quad_char_sub(x, 2) * ctx->quad_char_sub(y, 2));
    }
}

TEST_CASE("frobenius table equals repeated powering, exhaustive small q") {
    for (auto [p, n] : {std::pair<std::int64_t, std::int64_t>{3, 4}, {5, 3}, {7, 2}}) {
        auto ctx = FieldCtx::get(p, n);
        for (std::int64_t x = 0; x < ctx->q; ++x) {
            gf_t cur = static_cast<gf_t>(x);
            for (std::int64_t j = 0; j < n; ++j) {
                CHECK(ctx->frob(static_cast<gf_t>(x), j) == cur);
                cur = ctx->pow(cur, p);
            }
        }
    }
}

TEST_CASE("log/exp round trip and zech addition") {
    auto ctx = FieldCtx::get(3, 5);
    for (std::int64_t e = 0; e < ctx->Q; ++e)
        CHECK(ctx->log(ctx->from_log(static_cast<std::uint64_t>(e))) == e);
    const auto& zech = ctx->zech_table();
    for (std::int64_t e = 0; e < ctx->Q; e += 7) {
        gf_t direct = ctx->add(1, ctx->from_log(static_cast<std::uint64_t>(e)));
        if (direct == 0) CHECK(zech[e] == kZechNeg);
        else CHECK(zech[e] == ctx->log(direct));
    }
}

TEST_CASE("nibble addition agrees with digit addition") {
    auto ctx = FieldCtx::get(5, 3);
    const auto& nib = ctx->nibble_table();
    REQUIRE_FALSE(nib.empty());
    std::mt19937_64 rng(2);
    for (int i = 0; i < 2000; ++i) {
        gf_t a = rng() % ctx->q, b = rng() % ctx->q;
        std::uint64_t r = FieldCtx::nibble_add(nib[a], nib[b], 5);
        CHECK(r == nib[ctx->add(a, b)]);
    }
}

TEST_CASE("table guard") {
    CHECK_THROWS_AS(FieldCtx::get(3, 18), TooLarge);
}

TEST_CASE("subfield trace within F_{p^t}") {
    auto ctx = FieldCtx::get(3, 6);
    // Tr^2_1 on F_9 inside F_729: u + u^3
    for (std::int64_t x = 0; x < ctx->q; ++x) {
        gf_t u = ctx->trace_to(static_cast<gf_t>(x), 2);
        gf_t expect = ctx->add(u, ctx->frob(u, 1));
        CHECK(static_cast<gf_t>(ctx->subfield_trace1(u, 2)) == expect);
    }
}

}  // TEST_SUITE
