#include "dosum/expsum.hpp"

#include <algorithm>
#include <array>

#include "dosum/parallel.hpp"

namespace dosum {

namespace {

// Elimination rank of an s x s digit matrix mod p (small s).
int digit_matrix_rank(std::array<std::uint8_t, 256>& m, int s, int p) {
    int rank = 0;
    for (int col = 0; col < s && rank < s; ++col) {
        int piv = -1;
        for (int i = rank; i < s; ++i)
            if (m[i * s + col] != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int j = col; j < s; ++j) std::swap(m[piv * s + j], m[rank * s + j]);
        int pinv = 1;
        {  // inverse of the pivot mod p
            int x = m[rank * s + col], r = 1, e = p - 2;
            while (e) {
                if (e & 1) r = r * x % p;
                x = x * x % p;
                e >>= 1;
            }
            pinv = r;
        }
        for (int i = rank + 1; i < s; ++i) {
            int f = m[i * s + col] * pinv % p;
            if (f == 0) continue;
            for (int j = col; j < s; ++j)
                m[i * s + j] = static_cast<std::uint8_t>((m[i * s + j] + (p - f) * m[rank * s + j]) % p);
        }
        ++rank;
    }
    return rank;
}

inline std::uint32_t mod_add(std::uint32_t a, std::uint32_t b, std::uint32_t Q) {
    std::uint32_t r = a + b;
    return r >= Q ? r - Q : r;
}

}  // namespace

Sums::Sums(std::shared_ptr<const FieldCtx> ctx, ParamSet par)
    : ctx_(std::move(ctx)), par_(std::move(par)), basis_(make_basis(ctx_, par_.d, 0)) {
    const FieldCtx& F = *ctx_;
    const std::int64_t Q = F.Q, s = par_.s;

    e3_mod_ = static_cast<std::int64_t>((F.pj_mod_Q(3 * par_.k) + 1) % static_cast<std::uint64_t>(Q));
    e1_mod_ = static_cast<std::int64_t>((F.pj_mod_Q(par_.k) + 1) % static_cast<std::uint64_t>(Q));

    term3_log_.resize(static_cast<std::size_t>(Q));
    term1_log_.resize(static_cast<std::size_t>(Q));
    tr1_log_.resize(static_cast<std::size_t>(Q));
    trt_log_.resize(static_cast<std::size_t>(Q));
    for (std::int64_t e = 0; e < Q; ++e) {
        term3_log_[e] = static_cast<std::uint32_t>(e * e3_mod_ % Q);
        term1_log_[e] = static_cast<std::uint32_t>(e * e1_mod_ % Q);
        gf_t x = F.exp_table()[e];
        tr1_log_[e] = static_cast<std::uint8_t>(F.trace1(x));
    }

    f6_.resize(static_cast<std::size_t>(s));
    f4_.resize(static_cast<std::size_t>(s));
    f2_.resize(static_cast<std::size_t>(s));
    for (std::int64_t j = 0; j < s; ++j) {
        f6_[j] = F.frob(basis_.v[j], 6 * par_.k);
        f4_[j] = F.frob(basis_.v[j], 4 * par_.k);
        f2_[j] = F.frob(basis_.v[j], 2 * par_.k);
    }
    digit_coords_ = (par_.d == 1) && !F.nibble_table().empty();
    if (digit_coords_)
        for (std::int64_t i = 0; i < s; ++i)
            if (basis_.v[i] != F.pow(F.pi(), i)) digit_coords_ = false;

    hA_.resize(static_cast<std::size_t>(s * s));
    hB_.resize(static_cast<std::size_t>(s * s));
    for (std::int64_t i = 0; i < s; ++i)
        for (std::int64_t j = 0; j < s; ++j) {
            hA_[i * s + j] = F.add(F.mul(F.frob(basis_.v[i], 3 * par_.k), basis_.v[j]),
                                   F.mul(basis_.v[i], F.frob(basis_.v[j], 3 * par_.k)));
            hB_[i * s + j] = F.add(F.mul(F.frob(basis_.v[i], par_.k), basis_.v[j]),
                                   F.mul(basis_.v[i], F.frob(basis_.v[j], par_.k)));
        }
    half_ = F.inv(F.scalar(2));
    trd_table_.resize(static_cast<std::size_t>(F.q));
    for (std::int64_t c = 0; c < F.q; ++c) trd_table_[c] = F.trace_to(static_cast<gf_t>(c), par_.d);

    pt_ = ipow_checked(par_.p, par_.t);
    sub_elems_.resize(static_cast<std::size_t>(pt_));
    sub_elems_[0] = 0;
    std::int64_t step = Q / (pt_ - 1);
    for (std::int64_t j = 0; j + 1 < pt_; ++j) sub_elems_[1 + j] = F.exp_table()[j * step];
    sub_add_.resize(static_cast<std::size_t>(pt_ * pt_));
    for (std::int64_t i = 0; i < pt_; ++i)
        for (std::int64_t j = 0; j < pt_; ++j)
            sub_add_[i * pt_ + j] =
                static_cast<std::uint8_t>(subfield_index(F.add(sub_elems_[i], sub_elems_[j])));
    for (std::int64_t e = 0; e < Q; ++e)
        trt_log_[e] = static_cast<std::uint8_t>(subfield_index(F.trace_to(F.exp_table()[e], par_.t)));

    build_classes();
}

int Sums::subfield_index(gf_t x) const {
    if (x == 0) return 0;
    std::int64_t step = ctx_->Q / (pt_ - 1);
    std::uint32_t lg = ctx_->log(x);
    if (lg % step != 0) throw InternalCheckFailure("element not in F_{p^t}");
    return static_cast<int>(1 + lg / step);
}

gf_t Sums::f_ab(gf_t a, gf_t b, gf_t x) const {
    const FieldCtx& F = *ctx_;
    gf_t u = F.mul(a, F.mul(F.frob(x, 3 * par_.k), x));
    gf_t v = F.mul(b, F.mul(F.frob(x, par_.k), x));
    return F.add(u, v);
}

int Sums::theta_index(gf_t a, gf_t b, gf_t x) const {
    return subfield_index(ctx_->trace_to(f_ab(a, b, x), par_.t));
}

void Sums::build_classes() {
    const std::int64_t s = par_.s;
    int slots = static_cast<int>(2 * s + 3);
    class_values_.assign(static_cast<std::size_t>(slots), CycInt(static_cast<int>(par_.p)));
    class_deficit_.assign(static_cast<std::size_t>(slots), -1);
    class_eps_.assign(static_cast<std::size_t>(slots), 1);

    class_values_[0] = CycInt::integer(static_cast<int>(par_.p), big_pow(par_.p, par_.n));

    auto ref_value = [&](int i, int eps) {
        std::int64_t e2 = par_.n + static_cast<std::int64_t>(i) * par_.d;
        if (e2 % 2 == 0) return closed_value(par_.p, ValueKind::IntPower, eps, e2 / 2);
        return closed_value(par_.p, ValueKind::SqrtPstarPower, eps, (e2 - 1) / 2);
    };

    if (par_.dprime == 2 * par_.d) {
        for (std::int64_t w = 0; w <= s; ++w) {
            int cid = class_of_kernel(static_cast<int>(w));
            if (w % 2 != 0) continue;  // impossible for nonzero pairs; slot left inert
            int eps = par_.mu * ((w / 2) % 2 == 0 ? 1 : -1);
            class_values_[cid] = ref_value(static_cast<int>(w), eps);
            class_deficit_[cid] = static_cast<int>(w);
            class_eps_[cid] = eps;
        }
    } else {
        for (std::int64_t r = 0; r <= s; ++r)
            for (int disc : {1, -1}) {
                if (r == 0 && disc == -1) continue;
                int cid = class_of_rank(static_cast<int>(r), disc);
                RankProfile prof{static_cast<int>(r), disc};
                CycInt val = lemma1_sum(par_, prof);
                int i = static_cast<int>(s - r);
                int eps;
                if (val == ref_value(i, 1))
                    eps = 1;
                else if (val == ref_value(i, -1))
                    eps = -1;
                else
                    throw InternalCheckFailure("quadratic-form value off the closed-value grid");
                class_values_[cid] = val;
                class_deficit_[cid] = i;
                class_eps_[cid] = eps;
            }
    }
}

int Sums::class_of_rank(int r, int disc) const { return 1 + 2 * r + (disc < 0 ? 1 : 0); }
int Sums::class_of_kernel(int w) const { return 1 + 2 * w; }
int Sums::class_count() const { return static_cast<int>(class_values_.size()); }
const CycInt& Sums::class_value(int cid) const { return class_values_[cid]; }
int Sums::class_deficit(int cid) const { return class_deficit_[cid]; }
int Sums::class_eps(int cid) const { return class_eps_[cid]; }

int Sums::kernel_dim_of_class(int cid) const {
    if (cid == 0) return static_cast<int>(par_.s);
    if (par_.dprime == 2 * par_.d) return (cid - 1) / 2;
    return static_cast<int>(par_.s) - (cid - 1) / 2;  // rank consistency: w = s - r
}

int Sums::kernel_dim(gf_t a, gf_t b) const {
    const FieldCtx& F = *ctx_;
    const int s = static_cast<int>(par_.s);
    if (digit_coords_ && s <= 16) {
        const auto& nib = F.nibble_table();
        gf_t a1 = F.frob(a, 3 * par_.k), b1 = F.frob(b, 3 * par_.k), b2 = F.frob(b, 2 * par_.k);
        std::array<std::uint8_t, 256> m{};
        int p = static_cast<int>(par_.p);
        for (int j = 0; j < s; ++j) {
            std::uint64_t acc = nib[F.mul(a1, f6_[j])];
            acc = FieldCtx::nibble_add(acc, nib[F.mul(b1, f4_[j])], p);
            acc = FieldCtx::nibble_add(acc, nib[F.mul(b2, f2_[j])], p);
            acc = FieldCtx::nibble_add(acc, nib[F.mul(a, basis_.v[j])], p);
            for (int i = 0; i < s; ++i)
                m[i * s + j] = static_cast<std::uint8_t>(FieldCtx::nibble_digit(acc, i));
        }
        return s - digit_matrix_rank(m, s, p);
    }
    return PhiMap(par_, basis_, a, b).kernel_dim();
}

SymMatrix Sums::H(gf_t a, gf_t b) const {
    const FieldCtx& F = *ctx_;
    const std::int64_t s = par_.s;
    SymMatrix M;
    M.s = s;
    M.a.resize(static_cast<std::size_t>(s * s));
    for (std::int64_t i = 0; i < s; ++i)
        for (std::int64_t j = i; j < s; ++j) {
            gf_t e = F.add(trd_table_[F.mul(a, hA_[i * s + j])], trd_table_[F.mul(b, hB_[i * s + j])]);
            e = F.mul(half_, e);
            M.a[i * s + j] = e;
            M.a[j * s + i] = e;
        }
    return M;
}

RankProfile Sums::rank_profile(gf_t a, gf_t b) const { return diagonalize(*ctx_, par_.d, H(a, b)); }

int Sums::pair_class(gf_t a, gf_t b) const {
    if (a == 0 && b == 0) return 0;
    if (par_.dprime == 2 * par_.d) {
        int w = kernel_dim(a, b);
        if (w % 2 != 0) throw InternalCheckFailure("odd kernel dimension in the d'=2d case");
        return class_of_kernel(w);
    }
    RankProfile prof = rank_profile(a, b);
    return class_of_rank(prof.r, prof.disc);
}

CycInt Sums::t_oracle(gf_t a, gf_t b) const {
    const FieldCtx& F = *ctx_;
    const std::int64_t Q = F.Q;
    const int p = static_cast<int>(par_.p);
    std::vector<std::int64_t> cnt(static_cast<std::size_t>(2 * p), 0);
    cnt[0] += 1;  // x = 0
    const std::uint32_t la = (a == 0) ? 0 : F.log(a), lb = (b == 0) ? 0 : F.log(b);
    for (std::int64_t e = 0; e < Q; ++e) {
        int c = 0;
        if (a != 0) c += tr1_log_[mod_add(la, term3_log_[e], static_cast<std::uint32_t>(Q))];
        if (b != 0) c += tr1_log_[mod_add(lb, term1_log_[e], static_cast<std::uint32_t>(Q))];
        cnt[c] += 1;
    }
    std::vector<BigInt> raw(static_cast<std::size_t>(p));
    for (int c = 0; c < 2 * p; ++c)
        if (cnt[c]) raw[c % p] += cnt[c];
    return CycInt::canon(p, raw);
}

CycInt Sums::t_fast(gf_t a, gf_t b) const { return class_values_[pair_class(a, b)]; }

CycInt Sums::s_oracle(gf_t a, gf_t b, gf_t g) const {
    const FieldCtx& F = *ctx_;
    const std::int64_t Q = F.Q;
    const int p = static_cast<int>(par_.p);
    std::vector<std::int64_t> cnt(static_cast<std::size_t>(3 * p), 0);
    cnt[0] += 1;
    const std::uint32_t la = (a == 0) ? 0 : F.log(a), lb = (b == 0) ? 0 : F.log(b),
                        lg = (g == 0) ? 0 : F.log(g);
    for (std::int64_t e = 0; e < Q; ++e) {
        int c = 0;
        if (a != 0) c += tr1_log_[mod_add(la, term3_log_[e], static_cast<std::uint32_t>(Q))];
        if (b != 0) c += tr1_log_[mod_add(lb, term1_log_[e], static_cast<std::uint32_t>(Q))];
        if (g != 0) c += tr1_log_[mod_add(lg, static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(Q))];
        cnt[c] += 1;
    }
    std::vector<BigInt> raw(static_cast<std::size_t>(p));
    for (int c = 0; c < 3 * p; ++c)
        if (cnt[c]) raw[c % p] += cnt[c];
    return CycInt::canon(p, raw);
}

CycInt Sums::s_fast(gf_t a, gf_t b, gf_t g) const {
    if (a == 0 && b == 0) {
        if (g == 0) return class_values_[0];
        return CycInt(static_cast<int>(par_.p));
    }
    // The affine system behind S is 2XH + A_g = 0, whose field form carries a
    // Frobenius twist: it is solvable iff phi(x) = -g^{p^{3k}} is. The twist
    // is invisible when 3k = 0 mod n but matters otherwise.
    PhiMap pm(par_, basis_, a, b);
    auto x0 = pm.solve_shift(ctx_->frob(g, 3 * par_.k));
    if (!x0) return CycInt(static_cast<int>(par_.p));
    int c = ctx_->trace1(f_ab(a, b, *x0));
    return t_fast(a, b).times_zeta(-c);
}

DistTable Sums::t_distribution(TDistMethod method, int workers, std::uint64_t budget) const {
    const std::int64_t q = par_.q;
    const std::uint64_t pairs = static_cast<std::uint64_t>(q) * static_cast<std::uint64_t>(q);
    if (workers < 1) workers = default_workers();

    if (method == TDistMethod::Oracle) {
        unsigned __int128 est = static_cast<unsigned __int128>(pairs) * static_cast<std::uint64_t>(q);
        if (est > budget) throw BudgetExceeded("t_distribution oracle cost exceeds budget");
        std::vector<DistTable> shard(static_cast<std::size_t>(workers));
        parallel_shards(pairs, workers, [&](int sh, std::uint64_t lo, std::uint64_t hi) {
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                gf_t a = static_cast<gf_t>(idx / static_cast<std::uint64_t>(q));
                gf_t b = static_cast<gf_t>(idx % static_cast<std::uint64_t>(q));
                shard[sh].add(t_oracle(a, b), 1);
            }
        });
        DistTable out;
        for (auto& t : shard) out.merge(t);
        if (out.mass() != big_pow(par_.p, 2 * par_.n))
            throw InternalCheckFailure("t_distribution mass mismatch");
        return out;
    }

    unsigned __int128 est = static_cast<unsigned __int128>(pairs) *
                            static_cast<std::uint64_t>(par_.s * par_.s * par_.s + 16);
    if (est > budget) throw BudgetExceeded("t_distribution fast sweep cost exceeds budget");
    const int slots = class_count();
    std::vector<std::vector<std::uint64_t>> shard(static_cast<std::size_t>(workers),
                                                  std::vector<std::uint64_t>(slots, 0));
    parallel_shards(pairs, workers, [&](int sh, std::uint64_t lo, std::uint64_t hi) {
        auto& cls = shard[sh];
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            gf_t a = static_cast<gf_t>(idx / static_cast<std::uint64_t>(q));
            gf_t b = static_cast<gf_t>(idx % static_cast<std::uint64_t>(q));
            cls[static_cast<std::size_t>(pair_class(a, b))] += 1;
        }
    });
    std::vector<std::uint64_t> total(static_cast<std::size_t>(slots), 0);
    for (const auto& cl : shard)
        for (int i = 0; i < slots; ++i) total[i] += cl[i];
    DistTable out;
    for (int cid = 0; cid < slots; ++cid)
        if (total[cid]) out.add(class_values_[cid], BigInt(total[cid]));
    if (out.mass() != big_pow(par_.p, 2 * par_.n))
        throw InternalCheckFailure("t_distribution mass mismatch");
    return out;
}

DistTable Sums::s_distribution(SDistMethod method, int workers, std::uint64_t budget) const {
    const FieldCtx& F = *ctx_;
    const std::int64_t q = par_.q, Q = F.Q, p = par_.p;
    if (workers < 1) workers = default_workers();

    if (method == SDistMethod::Oracle) {
        const std::uint64_t pairs = static_cast<std::uint64_t>(q) * static_cast<std::uint64_t>(q);
        unsigned __int128 est = static_cast<unsigned __int128>(pairs) * static_cast<std::uint64_t>(q) *
                                static_cast<std::uint64_t>(q);
        if (est > budget) throw BudgetExceeded("s_distribution oracle cost exceeds budget");
        std::vector<DistTable> shard(static_cast<std::size_t>(workers));
        parallel_shards(pairs, workers, [&](int sh, std::uint64_t lo, std::uint64_t hi) {
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                gf_t a = static_cast<gf_t>(idx / static_cast<std::uint64_t>(q));
                gf_t b = static_cast<gf_t>(idx % static_cast<std::uint64_t>(q));
                for (std::int64_t g = 0; g < q; ++g) shard[sh].add(s_oracle(a, b, static_cast<gf_t>(g)), 1);
            }
        });
        DistTable out;
        for (auto& t : shard) out.merge(t);
        if (out.mass() != big_pow(p, 3 * par_.n)) throw InternalCheckFailure("s_distribution mass mismatch");
        return out;
    }

    // Pair sweep: for each nonzero pair, one pass over x buckets the exponent
    // c = Tr(f(x)); each distinct gamma = -phi(x) in the image is hit exactly
    // q0^w times and every preimage yields the same c, so gamma tallies are the
    // c-buckets divided by q0^w. Gammas outside the image contribute value 0.
    const std::uint64_t pairs = static_cast<std::uint64_t>(q) * static_cast<std::uint64_t>(q);
    unsigned __int128 est = static_cast<unsigned __int128>(pairs) *
                            static_cast<std::uint64_t>(q + par_.s * par_.s * par_.s);
    if (est > budget) throw BudgetExceeded("s_distribution pair sweep cost exceeds budget");

    const int slots = class_count();
    struct Shard {
        std::vector<std::uint64_t> cls_c;  // [cid][c]
        std::uint64_t zero = 0;
    };
    std::vector<Shard> shard(static_cast<std::size_t>(workers));
    for (auto& shd : shard) shd.cls_c.assign(static_cast<std::size_t>(slots) * p, 0);

    parallel_shards(pairs - 1, workers, [&](int sh, std::uint64_t lo, std::uint64_t hi) {
        auto& shd = shard[sh];
        std::vector<std::uint64_t> cnt(static_cast<std::size_t>(2 * p), 0);
        for (std::uint64_t rest = lo; rest < hi; ++rest) {
            std::uint64_t idx = rest + 1;  // skip (0,0)
            gf_t a = static_cast<gf_t>(idx / static_cast<std::uint64_t>(q));
            gf_t b = static_cast<gf_t>(idx % static_cast<std::uint64_t>(q));
            int cid = pair_class(a, b);
            int w = kernel_dim_of_class(cid);
            std::fill(cnt.begin(), cnt.end(), 0);
            cnt[0] += 1;
            const std::uint32_t la = (a == 0) ? 0 : F.log(a), lb = (b == 0) ? 0 : F.log(b);
            if (a != 0 && b != 0) {
                for (std::int64_t e = 0; e < Q; ++e) {
                    int c = tr1_log_[mod_add(la, term3_log_[e], static_cast<std::uint32_t>(Q))] +
                            tr1_log_[mod_add(lb, term1_log_[e], static_cast<std::uint32_t>(Q))];
                    cnt[c] += 1;
                }
            } else if (a != 0) {
                for (std::int64_t e = 0; e < Q; ++e)
                    cnt[tr1_log_[mod_add(la, term3_log_[e], static_cast<std::uint32_t>(Q))]] += 1;
            } else {
                for (std::int64_t e = 0; e < Q; ++e)
                    cnt[tr1_log_[mod_add(lb, term1_log_[e], static_cast<std::uint32_t>(Q))]] += 1;
            }
            std::uint64_t q0w = 1;
            for (int i = 0; i < w; ++i) q0w *= static_cast<std::uint64_t>(par_.q0);
            for (int c = 0; c < p; ++c) {
                std::uint64_t folded = cnt[c] + cnt[c + p];
                if (folded == 0) continue;
                if (folded % q0w != 0)
                    throw InternalCheckFailure("pair sweep: c-bucket not divisible by q0^w");
                shd.cls_c[static_cast<std::size_t>(cid) * p + c] += folded / q0w;
            }
            shd.zero += static_cast<std::uint64_t>(q) - static_cast<std::uint64_t>(q) / q0w;
        }
    });

    DistTable out;
    BigInt zero_total = 0;
    std::vector<BigInt> cls_c(static_cast<std::size_t>(slots) * p, 0);
    for (const auto& shd : shard) {
        zero_total += shd.zero;
        for (std::size_t i = 0; i < cls_c.size(); ++i) cls_c[i] += shd.cls_c[i];
    }
    for (int cid = 0; cid < slots; ++cid)
        for (int c = 0; c < p; ++c) {
            const BigInt& m = cls_c[static_cast<std::size_t>(cid) * p + c];
            if (m != 0) out.add(class_values_[cid].times_zeta(-c), m);
        }
    zero_total += q - 1;                                      // (0,0) pair, gamma != 0
    out.add(CycInt::integer(static_cast<int>(p), big_pow(p, par_.n)), 1);  // (0,0,0)
    if (zero_total != 0) out.add(CycInt(static_cast<int>(p)), zero_total);
    if (out.mass() != big_pow(p, 3 * par_.n)) throw InternalCheckFailure("s_distribution mass mismatch");
    return out;
}

MomentSystemCounts Sums::moment_system_counts(int workers, std::uint64_t budget) const {
    const FieldCtx& F = *ctx_;
    const std::int64_t q = par_.q, Q = F.Q;
    if (workers < 1) workers = default_workers();
    unsigned __int128 est =
        2 * static_cast<unsigned __int128>(q) * static_cast<std::uint64_t>(q);
    if (est > budget) throw BudgetExceeded("moment system enumeration cost exceeds budget");

    // power-value tables: x = pi^e -> codes of x^{p^{3k}+1}, x^{p^k+1}
    std::vector<gf_t> c3(static_cast<std::size_t>(Q)), c1(static_cast<std::size_t>(Q));
    for (std::int64_t e = 0; e < Q; ++e) {
        c3[e] = F.exp_table()[term3_log_[e]];
        c1[e] = F.exp_table()[term1_log_[e]];
    }
    std::vector<gf_t> negt(static_cast<std::size_t>(q)), neg1(static_cast<std::size_t>(q));
    for (std::int64_t c = 0; c < q; ++c) {
        negt[c] = F.neg(static_cast<gf_t>(c));
        neg1[c] = F.neg(F.add(static_cast<gf_t>(c), 1));
    }

    std::vector<std::uint64_t> m2_shard(static_cast<std::size_t>(workers), 0),
        tp_shard(static_cast<std::size_t>(workers), 0);
    // M2 over nonzero x,y (x = y = 0 added afterwards; x or y zero forces both zero)
    parallel_shards(static_cast<std::uint64_t>(Q), workers, [&](int sh, std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t acc = 0;
        for (std::uint64_t ex = lo; ex < hi; ++ex) {
            gf_t t3 = negt[c3[ex]], t1 = negt[c1[ex]];
            for (std::int64_t ey = 0; ey < Q; ++ey)
                if (c3[ey] == t3 && c1[ey] == t1) ++acc;
        }
        m2_shard[sh] += acc;
    });
    // T': x^{p^{3k}+1} + y^{p^{3k}+1} + 1 = 0 and likewise for p^k+1, zeros included
    parallel_shards(static_cast<std::uint64_t>(q), workers, [&](int sh, std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t acc = 0;
        for (std::uint64_t xi = lo; xi < hi; ++xi) {
            gf_t u3 = 0, u1 = 0;
            if (xi != 0) {
                std::uint32_t ex = F.log(static_cast<gf_t>(xi));
                u3 = c3[ex];
                u1 = c1[ex];
            }
            gf_t t3 = neg1[u3], t1 = neg1[u1];
            if (t3 == 0 && t1 == 0) ++acc;  // y = 0
            for (std::int64_t ey = 0; ey < Q; ++ey)
                if (c3[ey] == t3 && c1[ey] == t1) ++acc;
        }
        tp_shard[sh] += acc;
    });

    MomentSystemCounts out;
    out.M2 = 1;  // (0,0)
    for (auto v : m2_shard) out.M2 += v;
    out.Tprime = 0;
    for (auto v : tp_shard) out.Tprime += v;
    out.M3 = out.M2 + out.Tprime * BigInt(q - 1);

    if (par_.dprime == 2 * par_.d) {
        BigInt m2_expect = big_pow(par_.p, par_.n + par_.d) + big_pow(par_.p, par_.n) - big_pow(par_.p, par_.d);
        BigInt tp_expect = big_pow(par_.p, 3 * par_.d) - big_pow(par_.p, par_.d);
        if (out.M2 != m2_expect) throw InternalCheckFailure("M2 differs from its closed form");
        if (out.Tprime != tp_expect) throw InternalCheckFailure("T' differs from its closed form");
    } else {
        BigInt m2_expect = (par_.q0 % 4 == 1) ? BigInt(2 * q - 1) : BigInt(1);
        if (out.M2 != m2_expect) throw InternalCheckFailure("M2 differs from its closed form");
    }
    return out;
}

std::int64_t Sums::artin_count(gf_t a, gf_t b) const {
    if (par_.dprime != 2 * par_.d)
        throw InapplicableCase("the Artin-Schreier identity requires d' = 2d");
    const FieldCtx& F = *ctx_;
    std::vector<std::int32_t> roots(static_cast<std::size_t>(par_.q), 0);
    for (std::int64_t y = 0; y < par_.q; ++y) {
        gf_t c = F.sub(F.frob(static_cast<gf_t>(y), par_.d), static_cast<gf_t>(y));
        roots[c] += 1;
    }
    std::int64_t N = 0;
    for (std::int64_t x = 0; x < par_.q; ++x) N += roots[f_ab(a, b, static_cast<gf_t>(x))];
    CycInt T = t_fast(a, b);
    BigInt expect = BigInt(par_.q) + BigInt(par_.q0 - 1) * T.rational();
    if (BigInt(N) != expect)
        throw InternalCheckFailure("Artin-Schreier point count does not match q + (p^d-1) T");
    return N;
}

std::int64_t Sums::count_gamma(gf_t a, gf_t b, gf_t a_sub) const {
    if (a == 0 && b == 0) throw InternalCheckFailure("count_gamma needs a nonzero pair");
    PhiMap pm(par_, basis_, a, b);
    std::int64_t count = 0;
    for (std::int64_t g = 0; g < par_.q; ++g) {
        auto x0 = pm.solve_shift(static_cast<gf_t>(g));
        if (!x0) continue;
        gf_t theta = ctx_->trace_to(f_ab(a, b, *x0), par_.t);
        if (!pm.kernel_elements().empty()) {
            gf_t x1 = ctx_->add(*x0, pm.kernel_elements().front());
            if (ctx_->trace_to(f_ab(a, b, x1), par_.t) != theta)
                throw InternalCheckFailure("theta depends on the shift solution choice");
        }
        if (theta == a_sub) ++count;
    }
    return count;
}

// ---------------------------------------------------------------------------
// closed-form tables

BigInt pair_class_size(const ParamSet& par, int i, int eps) {
    const std::int64_t p = par.p, n = par.n, d = par.d, m = par.m;
    auto P = [&](std::int64_t e) { return big_pow(p, e); };
    if (par.dprime == 2 * d) {
        int want = par.mu * ((i / 2) % 2 == 0 ? 1 : -1);
        if (i % 2 != 0 || i < 0 || i > 6) return 0;
        if (eps != want) return 0;
        const BigInt pn1 = P(n) - 1;
        switch (i) {
            case 0:
                return exact_div(pn1 * (P(n + 6 * d) - P(n + 4 * d) - P(n + d) +
                                        par.mu * (P(m + 5 * d) - P(m + 4 * d)) + P(6 * d)),
                                 (P(d) + 1) * (P(2 * d) - 1) * (P(3 * d) + 1), "n0");
            case 2:
                return exact_div(pn1 * (P(n + 3 * d) + P(n + 2 * d) - P(n) - P(n - d) - P(n - 2 * d) -
                                        par.mu * P(m + 3 * d) + par.mu * P(m) + P(3 * d)),
                                 (P(d) + 1) * (P(d) + 1) * (P(2 * d) - 1), "n2");
            case 4:
                return exact_div((P(m - d) + par.mu) *
                                     (P(m + d) + P(m) - P(m - 2 * d) - par.mu * P(d)) * pn1,
                                 (P(d) + 1) * (P(d) + 1) * (P(d) + 1) * (P(d) - 1), "n4");
            case 6:
                return exact_div((P(m - 2 * d) - par.mu) * (P(m - d) + par.mu) * pn1,
                                 (P(d) + 1) * (P(2 * d) - 1) * (P(3 * d) + 1), "n6");
            default:
                return 0;
        }
    }
    if (i < 0 || i > 2) return 0;
    const BigInt pn1 = P(n) - 1;
    switch (i) {
        case 0:
            return exact_div(P(2 * d) * (P(n) - P(n - d) - P(n - 2 * d) + 1) * pn1,
                             2 * (P(2 * d) - 1), "n0e");
        case 1:
            return exact_div(P((n - d) / 2) * (P((n - d) / 2) + eps) * pn1, 2, "n1e");
        case 2:
            return exact_div(pn1 * (P(n - d) - 1), 2 * (P(2 * d) - 1), "n2e");
        default:
            return 0;
    }
}

namespace {
CycInt deficit_value(const ParamSet& par, int i, int eps) {
    std::int64_t e2 = par.n + static_cast<std::int64_t>(i) * par.d;
    if (e2 % 2 == 0) return closed_value(par.p, ValueKind::IntPower, eps, e2 / 2);
    return closed_value(par.p, ValueKind::SqrtPstarPower, eps, (e2 - 1) / 2);
}
}  // namespace

DistTable theorem_t_distribution(const ParamSet& par) {
    DistTable out;
    for (int i : par.rank_deficits())
        for (int eps : {1, -1}) {
            BigInt cnt = pair_class_size(par, i, eps);
            if (cnt != 0) out.add(deficit_value(par, i, eps), cnt);
        }
    out.add(CycInt::integer(static_cast<int>(par.p), big_pow(par.p, par.n)), 1);
    if (out.mass() != big_pow(par.p, 2 * par.n))
        throw InternalCheckFailure("closed-form T table mass differs from q^2");
    return out;
}

BigInt count_gamma_theorem(const ParamSet& par, int i, int eps, int a_class, std::int64_t t) {
    if (t == 0) t = par.t;
    if (par.d % t != 0) throw TNotDividingD("t must divide d");
    const std::int64_t p = par.p, n = par.n, d = par.d;
    auto P = [&](std::int64_t e) { return big_pow(p, e); };
    const std::int64_t nid = n - static_cast<std::int64_t>(i) * d;
    const bool odd_odd = ((par.s - i) % 2 != 0) && ((d / t) % 2 != 0);
    BigInt res;
    if (odd_odd) {
        if (a_class == 0) {
            res = P(nid - t);
        } else {
            if ((nid - t) % 2 != 0) throw InternalCheckFailure("odd exponent in gamma count");
            res = P(nid - t) + BigInt(eps * a_class) * P((nid - t) / 2);
        }
    } else {
        if (nid % 2 != 0) throw InternalCheckFailure("odd exponent in gamma count");
        if (a_class == 0)
            res = exact_div(P(nid) + BigInt(eps) * (P(t) - 1) * P(nid / 2), P(t), "gamma count a=0");
        else
            res = exact_div(P(nid) - BigInt(eps) * P(nid / 2), P(t), "gamma count a!=0");
    }
    if (res < 0) throw InternalCheckFailure("negative gamma count");
    return res;
}

DistTable theorem_s_distribution(const ParamSet& par) {
    const std::int64_t p = par.p, n = par.n, d = par.d, q = par.q;
    auto P = [&](std::int64_t e) { return big_pow(p, e); };
    DistTable out;
    BigInt zero_total = q - 1;  // (0,0) pair with gamma != 0
    for (int i : par.rank_deficits())
        for (int eps : {1, -1}) {
            BigInt cnt = pair_class_size(par, i, eps);
            if (cnt == 0) continue;
            const BigInt solvable = P(n - static_cast<std::int64_t>(i) * d);
            BigInt seen = 0;
            CycInt base = deficit_value(par, i, eps);
            for (std::int64_t a = 0; a < p; ++a) {
                int a_class = (a == 0) ? 0 : legendre(a, p);
                BigInt ga = count_gamma_theorem(par, i, eps, a_class, 1);
                seen += ga;
                if (ga != 0) out.add(base.times_zeta(-a), cnt * ga);
            }
            if (seen != solvable)
                throw InternalCheckFailure("gamma counts do not exhaust the solvable shifts");
            zero_total += cnt * (BigInt(q) - solvable);
        }
    out.add(CycInt::integer(static_cast<int>(p), P(n)), 1);  // (0,0,0)

    // zero-row closed form, asserted against the first-principles total
    BigInt zero_closed;
    if (par.dprime == 2 * d) {
        const std::int64_t m3 = 3 * par.m;
        BigInt bracket = P(2 * n) + P(2 * n - 9 * d) +
                         par.mu * (-P(m3) + P(m3 - d) + P(m3 - 3 * d) - P(m3 - 5 * d) -
                                   P(m3 - 7 * d) + P(m3 - 8 * d)) +
                         P(n) - P(n - d) - P(n - 4 * d) - P(n - 6 * d);
        zero_closed = BigInt(q - 1) * (1 + exact_div(bracket, P(d) + 1, "zero row bracket"));
    } else {
        zero_closed = BigInt(q - 1) *
                      (P(2 * n - d) - P(2 * n - 2 * d) + P(2 * n - 3 * d) - P(n - 2 * d) + 1);
    }
    if (zero_total != zero_closed)
        throw InternalCheckFailure("zero row differs from its closed form");
    if (zero_total != 0) out.add(CycInt(static_cast<int>(p)), zero_total);
    if (out.mass() != big_pow(p, 3 * n))
        throw InternalCheckFailure("closed-form S table mass differs from q^3");
    return out;
}

MomentReport moments(const ParamSet& par, const DistTable& tdist) {
    const std::int64_t p = par.p;
    MomentReport rep(static_cast<int>(p));
    for (const auto& [v, c] : tdist.tally) {
        CycInt v2 = v * v;
        rep.m1 = rep.m1 + v.scaled(c);
        rep.m2 = rep.m2 + v2.scaled(c);
        if (par.dprime == 2 * par.d) rep.m3 = rep.m3 + (v2 * v).scaled(c);
    }
    rep.expect1 = big_pow(p, 2 * par.n);
    if (par.dprime == 2 * par.d) {
        rep.expect2 = (big_pow(p, par.n + par.d) + big_pow(p, par.n) - big_pow(p, par.d)) *
                      big_pow(p, 2 * par.n);
        rep.expect3 = (big_pow(p, par.n + 3 * par.d) + big_pow(p, par.n) - big_pow(p, 3 * par.d)) *
                      big_pow(p, 2 * par.n);
        rep.third_checked = true;
    } else if (par.q0 % 4 == 1) {
        rep.expect2 = (2 * big_pow(p, par.n) - 1) * big_pow(p, 2 * par.n);
    } else {
        rep.expect2 = big_pow(p, 2 * par.n);
    }
    rep.ok1 = rep.m1 == CycInt::integer(static_cast<int>(p), rep.expect1);
    rep.ok2 = rep.m2 == CycInt::integer(static_cast<int>(p), rep.expect2);
    rep.ok3 = !rep.third_checked || rep.m3 == CycInt::integer(static_cast<int>(p), rep.expect3);
    return rep;
}

}  // namespace dosum
