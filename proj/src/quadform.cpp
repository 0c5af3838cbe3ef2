#include "dosum/quadform.hpp"

#include <algorithm>

#include "dosum/ints.hpp"

namespace dosum {

namespace {

// Dense linear algebra over the subfield F_{q0}, elements as field codes.
struct SubLin {
    const FieldCtx& ctx;

    gf_t mul(gf_t a, gf_t b) const { return ctx.mul(a, b); }
    gf_t add(gf_t a, gf_t b) const { return ctx.add(a, b); }
    gf_t sub(gf_t a, gf_t b) const { return ctx.sub(a, b); }
    gf_t inv(gf_t a) const { return ctx.inv(a); }

    // Rank of an r x c matrix (row-major), destructive.
    int rank(std::vector<gf_t>& mat, int rows, int cols) const {
        int rk = 0;
        for (int col = 0; col < cols && rk < rows; ++col) {
            int piv = -1;
            for (int i = rk; i < rows; ++i)
                if (mat[i * cols + col] != 0) { piv = i; break; }
            if (piv < 0) continue;
            for (int j = 0; j < cols; ++j) std::swap(mat[piv * cols + j], mat[rk * cols + j]);
            gf_t pinv = inv(mat[rk * cols + col]);
            for (int i = rk + 1; i < rows; ++i) {
                gf_t f = mul(mat[i * cols + col], pinv);
                if (f == 0) continue;
                for (int j = col; j < cols; ++j)
                    mat[i * cols + j] = sub(mat[i * cols + j], mul(f, mat[rk * cols + j]));
            }
            ++rk;
        }
        return rk;
    }
};

}  // namespace

std::vector<gf_t> SubfieldBasis::coords(gf_t x) const {
    std::vector<gf_t> X(static_cast<std::size_t>(s));
    coords_into(x, X.data());
    return X;
}

void SubfieldBasis::coords_into(gf_t x, gf_t* out) const {
    for (std::int64_t i = 0; i < s; ++i) out[i] = ctx->trace_to(ctx->mul(x, dual[i]), d);
}

gf_t SubfieldBasis::from_coords(const std::vector<gf_t>& X) const {
    gf_t acc = 0;
    for (std::int64_t i = 0; i < s; ++i) acc = ctx->add(acc, ctx->mul(X[i], v[i]));
    return acc;
}

SubfieldBasis make_basis(std::shared_ptr<const FieldCtx> ctx, std::int64_t d, int variant) {
    if (d < 1 || ctx->n % d != 0) throw JNotDividingN("basis degree must divide n");
    SubfieldBasis basis;
    basis.ctx = ctx;
    basis.d = d;
    basis.s = ctx->n / d;
    basis.q0 = ipow_checked(ctx->p, d);
    const std::int64_t s = basis.s;
    SubLin lin{*ctx};

    auto gram_of = [&](const std::vector<gf_t>& vs) {
        std::vector<gf_t> g(vs.size() * vs.size());
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = 0; j < vs.size(); ++j)
                g[i * vs.size() + j] = ctx->trace_to(ctx->mul(vs[i], vs[j]), d);
        return g;
    };
    auto independent = [&](const std::vector<gf_t>& vs) {
        // the trace form is nondegenerate, so full Gram rank <=> independence
        auto g = gram_of(vs);
        return lin.rank(g, static_cast<int>(vs.size()), static_cast<int>(vs.size())) ==
               static_cast<int>(vs.size());
    };

    std::vector<gf_t> v;
    if (variant == 0) {
        v.resize(static_cast<std::size_t>(s));
        for (std::int64_t i = 0; i < s; ++i) v[i] = ctx->pow(ctx->pi(), i);
        if (!independent(v)) v.clear();
    }
    if (v.empty()) {
        // deterministic greedy scan; variant 1 scans downward for a distinct basis
        std::vector<gf_t> picked;
        auto consider = [&](gf_t cand) {
            if (cand == 0 || static_cast<std::int64_t>(picked.size()) == s) return;
            picked.push_back(cand);
            if (!independent(picked)) picked.pop_back();
        };
        if (variant == 0)
            for (std::int64_t c = 1; c < ctx->q; ++c) consider(static_cast<gf_t>(c));
        else
            for (std::int64_t c = ctx->q - 1; c >= 1; --c) consider(static_cast<gf_t>(c));
        if (static_cast<std::int64_t>(picked.size()) != s)
            throw InternalCheckFailure("greedy basis completion failed");
        v = std::move(picked);
    }
    basis.v = v;

    // dual basis through the inverse Gram matrix: w_j = sum_k (G^-1)_{kj} v_k
    auto g = gram_of(v);
    std::vector<gf_t> inv_g(static_cast<std::size_t>(s * s), 0);
    for (std::int64_t i = 0; i < s; ++i) inv_g[i * s + i] = 1;
    for (std::int64_t col = 0; col < s; ++col) {
        std::int64_t piv = -1;
        for (std::int64_t i = col; i < s; ++i)
            if (g[i * s + col] != 0) { piv = i; break; }
        if (piv < 0) throw InternalCheckFailure("Gram matrix singular for an independent set");
        for (std::int64_t j = 0; j < s; ++j) {
            std::swap(g[piv * s + j], g[col * s + j]);
            std::swap(inv_g[piv * s + j], inv_g[col * s + j]);
        }
        gf_t pinv = ctx->inv(g[col * s + col]);
        for (std::int64_t j = 0; j < s; ++j) {
            g[col * s + j] = ctx->mul(g[col * s + j], pinv);
            inv_g[col * s + j] = ctx->mul(inv_g[col * s + j], pinv);
        }
        for (std::int64_t i = 0; i < s; ++i) {
            if (i == col || g[i * s + col] == 0) continue;
            gf_t f = g[i * s + col];
            for (std::int64_t j = 0; j < s; ++j) {
                g[i * s + j] = ctx->sub(g[i * s + j], ctx->mul(f, g[col * s + j]));
                inv_g[i * s + j] = ctx->sub(inv_g[i * s + j], ctx->mul(f, inv_g[col * s + j]));
            }
        }
    }
    basis.dual.resize(static_cast<std::size_t>(s));
    for (std::int64_t j = 0; j < s; ++j) {
        gf_t acc = 0;
        for (std::int64_t k = 0; k < s; ++k) acc = ctx->add(acc, ctx->mul(inv_g[k * s + j], v[k]));
        basis.dual[j] = acc;
    }
    // round-trip check: coords(v_i) = e_i
    for (std::int64_t i = 0; i < s; ++i) {
        auto X = basis.coords(v[i]);
        for (std::int64_t j = 0; j < s; ++j)
            if (X[j] != (i == j ? 1u : 0u))
                throw InternalCheckFailure("dual basis round trip failed");
    }
    return basis;
}

SymMatrix build_H(const ParamSet& par, const SubfieldBasis& basis, gf_t alpha, gf_t beta) {
    const FieldCtx& ctx = *basis.ctx;
    const std::int64_t s = basis.s;
    SymMatrix H;
    H.s = s;
    H.a.assign(static_cast<std::size_t>(s * s), 0);
    gf_t half = ctx.inv(ctx.scalar(2));
    for (std::int64_t i = 0; i < s; ++i) {
        for (std::int64_t j = i; j < s; ++j) {
            gf_t p3 = ctx.add(ctx.mul(ctx.frob(basis.v[i], 3 * par.k), basis.v[j]),
                              ctx.mul(basis.v[i], ctx.frob(basis.v[j], 3 * par.k)));
            gf_t p1 = ctx.add(ctx.mul(ctx.frob(basis.v[i], par.k), basis.v[j]),
                              ctx.mul(basis.v[i], ctx.frob(basis.v[j], par.k)));
            gf_t e = ctx.trace_to(ctx.add(ctx.mul(alpha, p3), ctx.mul(beta, p1)), par.d);
            e = ctx.mul(half, e);
            H.at(i, j) = e;
            H.at(j, i) = e;
        }
    }
    return H;
}

std::vector<gf_t> build_A(const SubfieldBasis& basis, gf_t gamma) {
    std::vector<gf_t> A(static_cast<std::size_t>(basis.s));
    for (std::int64_t i = 0; i < basis.s; ++i)
        A[i] = basis.ctx->trace_to(basis.ctx->mul(gamma, basis.v[i]), basis.d);
    return A;
}

RankProfile diagonalize(const FieldCtx& ctx, std::int64_t d, SymMatrix H) {
    const std::int64_t s = H.s;
    int r = 0;
    gf_t delta = 1;
    for (std::int64_t k = 0; k < s; ++k) {
        if (H.at(k, k) == 0) {
            std::int64_t jd = -1, jo = -1;
            for (std::int64_t j = k + 1; j < s; ++j) {
                if (jd < 0 && H.at(j, j) != 0) jd = j;
                if (jo < 0 && H.at(k, j) != 0) jo = j;
            }
            if (jd >= 0) {
                for (std::int64_t l = 0; l < s; ++l) std::swap(H.at(k, l), H.at(jd, l));
                for (std::int64_t l = 0; l < s; ++l) std::swap(H.at(l, k), H.at(l, jd));
            } else if (jo >= 0) {
                // all trailing diagonal entries vanish: x_k -> x_k + x_jo makes
                // the new diagonal entry 2 H(k,jo) != 0 (char != 2)
                for (std::int64_t l = 0; l < s; ++l) H.at(k, l) = ctx.add(H.at(k, l), H.at(jo, l));
                for (std::int64_t l = 0; l < s; ++l) H.at(l, k) = ctx.add(H.at(l, k), H.at(l, jo));
            } else {
                continue;  // row k is zero in the trailing block
            }
        }
        gf_t piv = H.at(k, k);
        gf_t pinv = ctx.inv(piv);
        delta = ctx.mul(delta, piv);
        ++r;
        for (std::int64_t j = k + 1; j < s; ++j) {
            gf_t f = ctx.mul(H.at(j, k), pinv);
            if (f == 0) continue;
            for (std::int64_t l = 0; l < s; ++l) H.at(j, l) = ctx.sub(H.at(j, l), ctx.mul(f, H.at(k, l)));
            for (std::int64_t l = 0; l < s; ++l) H.at(l, j) = ctx.sub(H.at(l, j), ctx.mul(f, H.at(l, k)));
        }
    }
    RankProfile prof;
    prof.r = r;
    prof.disc = (r == 0) ? 1 : ctx.quad_char_sub(delta, d);
    return prof;
}

CycInt lemma1_sum(std::int64_t p, std::int64_t d, std::int64_t s, const RankProfile& prof) {
    const std::int64_t r = prof.r, n = s * d;
    const std::int64_t E2 = 2 * n - r * d;  // sum magnitude is p^{E2/2}
    int sign = prof.disc;
    const bool q0_mod4_3 = (ipow_checked(p, d) % 4 == 3);
    if ((r * d) % 2 == 0) {
        if (q0_mod4_3 && (r / 2) % 2 == 1) sign = -sign;  // i^r = (-1)^{r/2}
        return closed_value(p, ValueKind::IntPower, sign, E2 / 2);
    }
    // odd r, odd d: one factor sqrt(q0*) remains, realized by the directly
    // summed Gauss sum over F_{q0}
    if (q0_mod4_3 && ((r - 1) / 2) % 2 == 1) sign = -sign;  // i^r = i (-1)^{(r-1)/2}
    BigInt mag = big_pow(p, (E2 - d) / 2);
    if (sign < 0) mag = -mag;
    return CycInt::integer(static_cast<int>(p), mag) * gauss_sum(p, d);
}

CycInt lemma1_sum(const ParamSet& par, const RankProfile& prof) {
    return lemma1_sum(par.p, par.d, par.s, prof);
}

gf_t phi_eval(const FieldCtx& ctx, const ParamSet& par, gf_t alpha, gf_t beta, gf_t x) {
    const std::int64_t k = par.k;
    gf_t acc = ctx.mul(ctx.frob(alpha, 3 * k), ctx.frob(x, 6 * k));
    acc = ctx.add(acc, ctx.mul(ctx.frob(beta, 3 * k), ctx.frob(x, 4 * k)));
    acc = ctx.add(acc, ctx.mul(ctx.frob(beta, 2 * k), ctx.frob(x, 2 * k)));
    acc = ctx.add(acc, ctx.mul(alpha, x));
    return acc;
}

PhiMap::PhiMap(const ParamSet& par, const SubfieldBasis& basis, gf_t alpha, gf_t beta)
    : basis_(&basis), s_(basis.s) {
    const FieldCtx& ctx = *basis.ctx;
    const std::int64_t s = s_;
    // verify F_{q0}-linearity on a sample rather than assuming it
    {
        gf_t c = ctx.from_log(ctx.Q / (basis.q0 - 1));  // generator of F_{q0}^*
        gf_t x = basis.v[s - 1];
        gf_t lhs = phi_eval(ctx, par, alpha, beta, ctx.mul(c, x));
        gf_t rhs = ctx.mul(c, phi_eval(ctx, par, alpha, beta, x));
        if (lhs != rhs) throw InternalCheckFailure("phi is not F_{q0}-linear");
    }

    // columns are coordinates of phi(v_j)
    std::vector<gf_t> M(static_cast<std::size_t>(s * s));
    std::vector<gf_t> col(static_cast<std::size_t>(s));
    for (std::int64_t j = 0; j < s; ++j) {
        basis.coords_into(phi_eval(ctx, par, alpha, beta, basis.v[j]), col.data());
        for (std::int64_t i = 0; i < s; ++i) M[i * s + j] = col[i];
    }

    // Gauss-Jordan with recorded transform: E = T M in reduced echelon form
    E_ = M;
    T_.assign(static_cast<std::size_t>(s * s), 0);
    for (std::int64_t i = 0; i < s; ++i) T_[i * s + i] = 1;
    pivot_col_.clear();
    std::int64_t row = 0;
    for (std::int64_t col_i = 0; col_i < s && row < s; ++col_i) {
        std::int64_t piv = -1;
        for (std::int64_t i = row; i < s; ++i)
            if (E_[i * s + col_i] != 0) { piv = i; break; }
        if (piv < 0) continue;
        for (std::int64_t j = 0; j < s; ++j) {
            std::swap(E_[piv * s + j], E_[row * s + j]);
            std::swap(T_[piv * s + j], T_[row * s + j]);
        }
        gf_t pinv = ctx.inv(E_[row * s + col_i]);
        for (std::int64_t j = 0; j < s; ++j) {
            E_[row * s + j] = ctx.mul(E_[row * s + j], pinv);
            T_[row * s + j] = ctx.mul(T_[row * s + j], pinv);
        }
        for (std::int64_t i = 0; i < s; ++i) {
            if (i == row) continue;
            gf_t f = E_[i * s + col_i];
            if (f == 0) continue;
            for (std::int64_t j = 0; j < s; ++j) {
                E_[i * s + j] = ctx.sub(E_[i * s + j], ctx.mul(f, E_[row * s + j]));
                T_[i * s + j] = ctx.sub(T_[i * s + j], ctx.mul(f, T_[row * s + j]));
            }
        }
        pivot_col_.push_back(static_cast<int>(col_i));
        ++row;
    }
    rank_ = static_cast<int>(row);
    w_ = static_cast<int>(s - rank_);

    // kernel basis from the free columns
    std::vector<bool> is_pivot(static_cast<std::size_t>(s), false);
    for (int c : pivot_col_) is_pivot[static_cast<std::size_t>(c)] = true;
    for (std::int64_t f = 0; f < s; ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) continue;
        std::vector<gf_t> X(static_cast<std::size_t>(s), 0);
        X[static_cast<std::size_t>(f)] = 1;
        for (int i = 0; i < rank_; ++i)
            X[static_cast<std::size_t>(pivot_col_[i])] = ctx.neg(E_[i * s + f]);
        kernel_.push_back(basis.from_coords(X));
    }
    if (static_cast<int>(kernel_.size()) != w_)
        throw InternalCheckFailure("kernel dimension bookkeeping mismatch");
}

std::optional<gf_t> PhiMap::solve_shift(gf_t gamma) const {
    const FieldCtx& ctx = *basis_->ctx;
    const std::int64_t s = s_;
    std::vector<gf_t> rhs = basis_->coords(ctx.neg(gamma));
    std::vector<gf_t> y(static_cast<std::size_t>(s), 0);
    for (std::int64_t i = 0; i < s; ++i) {
        gf_t acc = 0;
        for (std::int64_t j = 0; j < s; ++j) acc = ctx.add(acc, ctx.mul(T_[i * s + j], rhs[j]));
        y[i] = acc;
    }
    for (std::int64_t i = rank_; i < s; ++i)
        if (y[i] != 0) return std::nullopt;
    std::vector<gf_t> X(static_cast<std::size_t>(s), 0);
    for (int i = 0; i < rank_; ++i) X[static_cast<std::size_t>(pivot_col_[i])] = y[i];
    return basis_->from_coords(X);
}

}  // namespace dosum
