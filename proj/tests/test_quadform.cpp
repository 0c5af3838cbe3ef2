#include <doctest.h>

#include <random>

#include "dosum/quadform.hpp"

using namespace dosum;

namespace {

// Oracle: the literal character sum sum_X zeta^{Tr^d_1(X H X^T)} over all
// coordinate rows, by enumeration.
CycInt direct_form_sum(const FieldCtx& ctx, std::int64_t d, const SymMatrix& H) {
    std::int64_t q0 = 1;
    for (std::int64_t i = 0; i < d; ++i) q0 *= ctx.p;
    // enumerate F_{q0}^s through subfield element indices
    std::vector<gf_t> sub;
    for (std::int64_t x = 0; x < ctx.q; ++x)
        if (ctx.in_subfield(static_cast<gf_t>(x), d)) sub.push_back(static_cast<gf_t>(x));
    REQUIRE(static_cast<std::int64_t>(sub.size()) == q0);
    std::vector<BigInt> cnt(static_cast<std::size_t>(ctx.p), 0);
    std::vector<std::size_t> idx(static_cast<std::size_t>(H.s), 0);
    while (true) {
        gf_t acc = 0;
        for (std::int64_t i = 0; i < H.s; ++i)
            for (std::int64_t j = 0; j < H.s; ++j)
                acc = ctx.add(acc, ctx.mul(sub[idx[i]], ctx.mul(H.at(i, j), sub[idx[j]])));
        cnt[ctx.subfield_trace1(acc, d)] += 1;  // the exponent is Tr^d_1 inside F_{q0}
        std::int64_t pos = 0;
        while (pos < H.s && ++idx[pos] == sub.size()) idx[pos++] = 0;
        if (pos == H.s) break;
    }
    return CycInt::canon(static_cast<int>(ctx.p), cnt);
}

int plain_rank(const FieldCtx& ctx, SymMatrix H) {
    int rank = 0;
    for (std::int64_t col = 0; col < H.s && rank < H.s; ++col) {
        std::int64_t piv = -1;
        for (std::int64_t i = rank; i < H.s; ++i)
            if (H.at(i, col) != 0) { piv = i; break; }
        if (piv < 0) continue;
        for (std::int64_t j = 0; j < H.s; ++j) std::swap(H.at(piv, j), H.at(rank, j));
        gf_t pinv = ctx.inv(H.at(rank, col));
        for (std::int64_t i = rank + 1; i < H.s; ++i) {
            gf_t f = ctx.mul(H.at(i, col), pinv);
            for (std::int64_t j = 0; j < H.s; ++j)
                H.at(i, j) = ctx.sub(H.at(i, j), ctx.mul(f, H.at(rank, j)));
        }
        ++rank;
    }
    return rank;
}

}  // namespace

TEST_SUITE("quadform") {

TEST_CASE("basis construction") {
    auto f27 = FieldCtx::get(3, 3);
    SubfieldBasis full = make_basis(f27, 3);
    CHECK(full.s == 1);
    CHECK(full.v == std::vector<gf_t>{1});

    SubfieldBasis poly = make_basis(f27, 1);
    CHECK(poly.s == 3);
    CHECK(poly.v == std::vector<gf_t>{1, f27->pi(), f27->pow(f27->pi(), 2)});
    // coordinate round trip on every element
    for (std::int64_t x = 0; x < 27; ++x) {
        auto X = poly.coords(static_cast<gf_t>(x));
        CHECK(poly.from_coords(X) == static_cast<gf_t>(x));
    }

    auto f729 = FieldCtx::get(3, 6);
    SubfieldBasis over9 = make_basis(f729, 2);
    CHECK(over9.s == 3);
    for (gf_t c : over9.coords(f729->pi())) CHECK(f729->in_subfield(c, 2));

    SubfieldBasis alt = make_basis(f729, 2, 1);
    CHECK(alt.v != over9.v);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        gf_t x = rng() % 729;
        CHECK(alt.from_coords(alt.coords(x)) == x);
    }
}

TEST_CASE("H matrix represents the quadratic form") {
    auto ctx = FieldCtx::get(3, 3);
    ParamSet par = derive_params(3, 3, 1, 1);
    SubfieldBasis basis = make_basis(ctx, par.d);

    SymMatrix zero = build_H(par, basis, 0, 0);
    for (gf_t v : zero.a) CHECK(v == 0);

    // X H X^T = Tr^n_d(a x^{p^{3k}+1} + b x^{p^k+1}) for every x, a few pairs
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 8; ++trial) {
        gf_t a = rng() % 27, b = rng() % 27;
        if (trial == 0) { a = ctx->pi(); b = 0; }
        SymMatrix H = build_H(par, basis, a, b);
        for (std::int64_t x = 0; x < 27; ++x) {
            auto X = basis.coords(static_cast<gf_t>(x));
            gf_t lhs = 0;
            for (std::int64_t i = 0; i < 3; ++i)
                for (std::int64_t j = 0; j < 3; ++j)
                    lhs = ctx->add(lhs, ctx->mul(X[i], ctx->mul(H.at(i, j), X[j])));
            gf_t x3 = ctx->mul(ctx->frob(static_cast<gf_t>(x), 3), static_cast<gf_t>(x));
            gf_t x1 = ctx->mul(ctx->frob(static_cast<gf_t>(x), 1), static_cast<gf_t>(x));
            gf_t rhs = ctx->trace_to(ctx->add(ctx->mul(a, x3), ctx->mul(b, x1)), 1);
            CHECK(lhs == rhs);
        }
    }

    // H_{wa,wb} = w H_{a,b} for subfield scalars w
    gf_t a = ctx->pi(), b = 7;
    SymMatrix H = build_H(par, basis, a, b);
    for (gf_t w : {gf_t{1}, gf_t{2}}) {
        SymMatrix Hw = build_H(par, basis, ctx->mul(w, a), ctx->mul(w, b));
        for (std::size_t i = 0; i < H.a.size(); ++i) CHECK(Hw.a[i] == ctx->mul(w, H.a[i]));
    }
}

TEST_CASE("A vector represents the linear form") {
    auto ctx = FieldCtx::get(3, 3);
    SubfieldBasis basis = make_basis(ctx, 1);
    auto zero = build_A(basis, 0);
    for (gf_t v : zero) CHECK(v == 0);
    // explicit traces and additivity
    auto a1 = build_A(basis, 1);
    for (std::int64_t i = 0; i < 3; ++i) CHECK(a1[i] == ctx->trace_to(basis.v[i], 1));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        gf_t g1 = rng() % 27, g2 = rng() % 27;
        auto u = build_A(basis, g1), v = build_A(basis, g2), w = build_A(basis, ctx->add(g1, g2));
        for (std::int64_t j = 0; j < 3; ++j) CHECK(w[j] == ctx->add(u[j], v[j]));
    }
}

TEST_CASE("diagonalization rank, class, and Lemma-style sum values") {
    auto ctx = FieldCtx::get(3, 4);
    // d = 1 linear algebra over F_3 inside F_81
    SymMatrix zero;
    zero.s = 4;
    zero.a.assign(16, 0);
    RankProfile pz = diagonalize(*ctx, 1, zero);
    CHECK(pz.r == 0);
    CHECK(pz.disc == 1);

    SymMatrix eye;
    eye.s = 4;
    eye.a.assign(16, 0);
    for (int i = 0; i < 4; ++i) eye.a[i * 4 + i] = 1;
    RankProfile pe = diagonalize(*ctx, 1, eye);
    CHECK(pe.r == 4);
    CHECK(pe.disc == 1);

    // random symmetric 4x4 over F_3: rank agrees with plain elimination and
    // the profile reproduces the direct character sum through the closed form
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        SymMatrix H;
        H.s = 4;
        H.a.assign(16, 0);
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                gf_t v = rng() % 3;
                H.at(i, j) = v;
                H.at(j, i) = v;
            }
        RankProfile prof = diagonalize(*ctx, 1, H);
        CHECK(prof.r == plain_rank(*ctx, H));
        CHECK(lemma1_sum(3, 1, 4, prof) == direct_form_sum(*ctx, 1, H));
    }
    CHECK(lemma1_sum(3, 1, 4, RankProfile{0, 1}) == CycInt::integer(3, 81));  // trivial form
}

TEST_CASE("lemma1 closed value example") {
    // q0 = 3, s = 3, r = 2, disc +1: i^2 3^2 = -9
    ParamSet par = derive_params(3, 3, 1, 1);
    CHECK(lemma1_sum(par, RankProfile{2, 1}) == CycInt::integer(3, -9));
    CHECK(lemma1_sum(par, RankProfile{0, 1}) == CycInt::integer(3, 27));
}

TEST_CASE("diagonalize matches direct sums over F_9 too") {
    auto ctx = FieldCtx::get(3, 6);
    ParamSet par = derive_params(3, 6, 2, 1);  // d = 2, q0 = 9
    SubfieldBasis basis = make_basis(ctx, 2);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        gf_t a = rng() % 729, b = rng() % 729;
        SymMatrix H = build_H(par, basis, a, b);
        RankProfile prof = diagonalize(*ctx, 2, H);
        CHECK(lemma1_sum(par, prof) == direct_form_sum(*ctx, 2, H));
    }
}

TEST_CASE("phi evaluation and kernel") {
    auto ctx = FieldCtx::get(3, 3);
    ParamSet par = derive_params(3, 3, 1, 1);
    SubfieldBasis basis = make_basis(ctx, 1);

    for (std::int64_t x = 0; x < 27; ++x) CHECK(phi_eval(*ctx, par, 0, 0, static_cast<gf_t>(x)) == 0);

    std::mt19937_64 rng(10);
    for (int i = 0; i < 50; ++i) {
        gf_t a = rng() % 27, b = rng() % 27, x = rng() % 27, y = rng() % 27;
        CHECK(phi_eval(*ctx, par, a, b, ctx->add(x, y)) ==
              ctx->add(phi_eval(*ctx, par, a, b, x), phi_eval(*ctx, par, a, b, y)));
    }
    // direct Frobenius formula
    gf_t a = 1, b = 0, x = ctx->pi();
    gf_t expect = ctx->add(ctx->mul(ctx->frob(a, 3), ctx->frob(x, 6)), ctx->mul(a, x));
    CHECK(phi_eval(*ctx, par, a, b, x) == expect);

    PhiMap zero_map(par, basis, 0, 0);
    CHECK(zero_map.kernel_dim() == 3);

    // kernel elements really are kernel elements; rank consistency exhaustively
    for (std::int64_t ab = 1; ab < 27 * 27; ++ab) {
        gf_t aa = static_cast<gf_t>(ab / 27), bb = static_cast<gf_t>(ab % 27);
        PhiMap pm(par, basis, aa, bb);
        for (gf_t kel : pm.kernel_elements()) {
            CHECK(kel != 0);
            CHECK(phi_eval(*ctx, par, aa, bb, kel) == 0);
        }
        SymMatrix H = build_H(par, basis, aa, bb);
        CHECK(pm.kernel_dim() == 3 - diagonalize(*ctx, 1, H).r);
    }
}

TEST_CASE("kernel dimensions in the d'=2d case") {
    auto ctx = FieldCtx::get(3, 8);
    ParamSet par = derive_params(3, 8, 1, 1);
    SubfieldBasis basis = make_basis(ctx, 1);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 120; ++i) {
        gf_t a = rng() % ctx->q, b = rng() % ctx->q;
        if (a == 0 && b == 0) continue;
        int w = PhiMap(par, basis, a, b).kernel_dim();
        CHECK((w == 0 || w == 2 || w == 4 || w == 6));
    }
}

TEST_CASE("shifted solves") {
    auto ctx = FieldCtx::get(3, 5);
    ParamSet par = derive_params(3, 5, 1, 1);
    SubfieldBasis basis = make_basis(ctx, 1);

    PhiMap zero_map(par, basis, 0, 0);
    CHECK(*zero_map.solve_shift(0) == 0);
    CHECK_FALSE(zero_map.solve_shift(1).has_value());

    std::mt19937_64 rng(12);
    int solvable = 0;
    for (int i = 0; i < 300; ++i) {
        gf_t a = rng() % ctx->q, b = rng() % ctx->q, g = rng() % ctx->q;
        if (a == 0 && b == 0) continue;
        PhiMap pm(par, basis, a, b);
        CHECK(*pm.solve_shift(0) == 0);
        auto x0 = pm.solve_shift(g);
        if (x0) {
            ++solvable;
            CHECK(ctx->add(phi_eval(*ctx, par, a, b, *x0), g) == 0);
            // the full solution set is x0 + kernel
            for (gf_t kel : pm.kernel_elements())
                CHECK(ctx->add(phi_eval(*ctx, par, a, b, ctx->add(*x0, kel)), g) == 0);
        } else {
            for (std::int64_t x = 0; x < ctx->q; ++x)
                REQUIRE(ctx->add(phi_eval(*ctx, par, a, b, static_cast<gf_t>(x)), g) != 0);
        }
    }
    CHECK(solvable > 0);
}

}  // TEST_SUITE
