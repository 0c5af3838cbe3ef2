#include "dosum/codes.hpp"

#include <algorithm>
#include <map>

#include "dosum/parallel.hpp"

namespace dosum {

namespace {
inline std::uint32_t mod_add(std::uint32_t a, std::uint32_t b, std::uint32_t Q) {
    std::uint32_t r = a + b;
    return r >= Q ? r - Q : r;
}
}  // namespace

std::vector<gf_t> minimal_poly(const FieldCtx& ctx, const ParamSet& par, std::int64_t e) {
    const std::int64_t Q = ctx.Q;
    std::int64_t base = ((-e) % Q + Q) % Q;
    if (base == 0 && e != 0) throw ValidationError("degenerate exponent: e = 0 mod q-1");
    if (e <= 0) throw ValidationError("defining exponent must be positive");
    // p^t-cyclotomic coset of -e
    std::uint64_t mult = 1;
    for (std::int64_t i = 0; i < par.t; ++i) mult = mult * static_cast<std::uint64_t>(par.p) % Q;
    std::vector<std::int64_t> coset;
    std::int64_t cur = base;
    do {
        coset.push_back(cur);
        cur = static_cast<std::int64_t>(static_cast<std::uint64_t>(cur) * mult % Q);
    } while (cur != base);

    std::vector<gf_t> poly{1};
    for (std::int64_t c : coset) {
        gf_t root = ctx.exp_table()[c];
        std::vector<gf_t> next(poly.size() + 1, 0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] = ctx.add(next[i + 1], poly[i]);                 // x * poly
            next[i] = ctx.sub(next[i], ctx.mul(root, poly[i]));         // - root * poly
        }
        poly = std::move(next);
    }
    std::reverse(poly.begin(), poly.end());  // ascending coefficients
    for (gf_t c : poly)
        if (!ctx.in_subfield(c, par.t))
            throw InternalCheckFailure("minimal polynomial coefficient escapes F_{p^t}");
    return poly;
}

CodeSpec build_code(const Sums& sums, CodeId which) {
    const FieldCtx& ctx = sums.ctx();
    const ParamSet& par = sums.par();
    CodeSpec spec;
    spec.par = par;
    spec.which = which;
    spec.length = ctx.Q;

    // defining exponents as residues mod q-1
    std::int64_t e1 = (ipow_checked(par.p, par.k) + 1) % ctx.Q;
    std::int64_t e3 = static_cast<std::int64_t>((ctx.pj_mod_Q(3 * par.k) + 1) % ctx.Q);
    if (which == CodeId::C2) spec.exponents = {1, e1, e3};
    else spec.exponents = {e1, e3};

    std::uint64_t mult = 1;
    for (std::int64_t i = 0; i < par.t; ++i) mult = mult * static_cast<std::uint64_t>(par.p) % ctx.Q;
    spec.dim = 0;
    for (std::int64_t e : spec.exponents) {
        std::int64_t base = ((-e) % ctx.Q + ctx.Q) % ctx.Q;
        std::vector<std::int64_t> coset;
        std::int64_t cur = base;
        do {
            coset.push_back(cur);
            cur = static_cast<std::int64_t>(static_cast<std::uint64_t>(cur) * mult % ctx.Q);
        } while (cur != base);
        spec.dim += static_cast<std::int64_t>(coset.size());
        std::sort(coset.begin(), coset.end());
        spec.cosets.push_back(std::move(coset));
        spec.h.push_back(minimal_poly(ctx, par, e));
    }
    for (std::size_t i = 0; i < spec.cosets.size(); ++i)
        for (std::size_t j = i + 1; j < spec.cosets.size(); ++j)
            if (spec.cosets[i] == spec.cosets[j])
                throw InternalCheckFailure("defining exponents share a cyclotomic coset");

    std::int64_t expected = 0;
    if (which == CodeId::C1)
        expected = par.k_sixth ? 3 * par.n0 / 2 : 2 * par.n0;
    else
        expected = par.k_sixth ? 5 * par.n0 / 2 : 3 * par.n0;
    if (spec.dim != expected)
        throw InternalCheckFailure("code dimension " + std::to_string(spec.dim) +
                                   " differs from the expected " + std::to_string(expected));

    spec.codewords = big_pow(par.p, par.t * spec.dim);
    int u = (which == CodeId::C2) ? 3 : 2;
    spec.fiber = exact_div(big_pow(par.p, u * par.n), spec.codewords, "message fiber")
                     .convert_to<std::int64_t>();
    return spec;
}

std::int64_t codeword_weight(const Sums& sums, CodeId which, gf_t a, gf_t b, gf_t g) {
    const FieldCtx& F = sums.ctx();
    const std::int64_t Q = F.Q;
    if (which == CodeId::C1 && g != 0)
        throw ValidationError("C1 codewords have no gamma component");
    const auto& t3 = sums.term3_log();
    const auto& t1 = sums.term1_log();
    const auto& trt = sums.trt_idx_of_log();
    const std::uint32_t la = (a == 0) ? 0 : F.log(a), lb = (b == 0) ? 0 : F.log(b),
                        lg = (g == 0) ? 0 : F.log(g);
    std::int64_t weight = 0;
    for (std::int64_t i = 0; i < Q; ++i) {
        int idx = 0;
        if (a != 0) idx = trt[mod_add(la, t3[i], static_cast<std::uint32_t>(Q))];
        if (b != 0) idx = sums.subfield_add_idx(idx, trt[mod_add(lb, t1[i], static_cast<std::uint32_t>(Q))]);
        if (g != 0)
            idx = sums.subfield_add_idx(
                idx, trt[mod_add(lg, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(Q))]);
        if (idx != 0) ++weight;
    }
    return weight;
}

std::int64_t weight_from_sums(const Sums& sums, CodeId which, gf_t a, gf_t b, gf_t g) {
    const FieldCtx& F = sums.ctx();
    const ParamSet& par = sums.par();
    if (which == CodeId::C1 && g != 0)
        throw ValidationError("C1 codewords have no gamma component");
    CycInt R(static_cast<int>(par.p));
    for (int idx = 1; idx < sums.subfield_order(); ++idx) {
        gf_t w = sums.subfield_element(idx);
        gf_t wa = F.mul(w, a), wb = F.mul(w, b);
        if (which == CodeId::C1)
            R = R + sums.t_fast(wa, wb);
        else
            R = R + sums.s_fast(wa, wb, F.mul(w, g));
    }
    if (!R.is_rational()) throw NonIntegerWeight("scaled character sum is not rational: " + R.str());
    // weight = (p^t-1) p^{n-t} - R / p^t
    BigInt pt = big_pow(par.p, par.t);
    if (R.rational() % pt != 0) throw NonIntegerWeight("R not divisible by p^t");
    BigInt wgt = (pt - 1) * big_pow(par.p, par.n - par.t) - R.rational() / pt;
    if (wgt < 0 || wgt > par.q - 1) throw NonIntegerWeight("weight outside [0, q-1]");
    return wgt.convert_to<std::int64_t>();
}

namespace {

// Shared weight table assembly: merge shard tallies, undo the message fiber
// multiplicity, check the mass.
WeightTable finish_weights(const CodeSpec& spec, std::vector<std::map<std::int64_t, std::uint64_t>>& shards) {
    std::map<std::int64_t, BigInt> total;
    for (const auto& sh : shards)
        for (const auto& [w, c] : sh) total[w] += c;
    WeightTable out;
    for (const auto& [w, c] : total)
        out.add(w, exact_div(c, spec.fiber, "weight fiber multiplicity"));
    if (out.mass() != spec.codewords)
        throw InternalCheckFailure("weight table mass differs from the code size");
    return out;
}

// R(cid, theta) = sum_{w in F_{p^t}^*} zeta^{-Tr^t_1(w theta)} eta0(w)^r T,
// the scaled-message sum entering the weight identity for a pair of class cid.
std::int64_t weight_of_class_theta(const Sums& sums, int cid, int theta_idx) {
    const ParamSet& par = sums.par();
    const FieldCtx& F = sums.ctx();
    int r = static_cast<int>(par.s) - sums.class_deficit(cid);
    const CycInt& T = sums.class_value(cid);
    CycInt R(static_cast<int>(par.p));
    gf_t theta = sums.subfield_element(theta_idx);
    for (int idx = 1; idx < sums.subfield_order(); ++idx) {
        gf_t w = sums.subfield_element(idx);
        int eta = F.quad_char_sub(w, par.d);
        int c = F.subfield_trace1(F.mul(w, theta), par.t);
        CycInt term = T.times_zeta(-c);
        if (r % 2 == 1 && eta < 0) term = -term;
        R = R + term;
    }
    if (!R.is_rational()) throw NonIntegerWeight("class weight sum is not rational");
    BigInt pt = big_pow(par.p, par.t);
    if (R.rational() % pt != 0) throw NonIntegerWeight("class R not divisible by p^t");
    BigInt wgt = (pt - 1) * big_pow(par.p, par.n - par.t) - R.rational() / pt;
    if (wgt < 0 || wgt > par.q - 1) throw NonIntegerWeight("class weight outside [0, q-1]");
    return wgt.convert_to<std::int64_t>();
}

}  // namespace

WeightTable weight_distribution(const Sums& sums, CodeId which, WeightMethod method, int workers,
                                std::uint64_t budget) {
    const FieldCtx& F = sums.ctx();
    const ParamSet& par = sums.par();
    CodeSpec spec = build_code(sums, which);
    const std::int64_t q = par.q;
    if (workers < 1) workers = default_workers();
    const int u = (which == CodeId::C2) ? 3 : 2;

    if (method == WeightMethod::Enum) {
        std::uint64_t messages = 1;
        for (int i = 0; i < u; ++i) messages *= static_cast<std::uint64_t>(q);
        unsigned __int128 est = static_cast<unsigned __int128>(messages) * static_cast<std::uint64_t>(q);
        if (est > budget) throw BudgetExceeded("codeword enumeration cost exceeds budget");
        std::vector<std::map<std::int64_t, std::uint64_t>> shards(static_cast<std::size_t>(workers));
        parallel_shards(messages, workers, [&](int sh, std::uint64_t lo, std::uint64_t hi) {
            auto& tally = shards[sh];
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                std::uint64_t rest = idx;
                gf_t g = 0;
                if (u == 3) {
                    g = static_cast<gf_t>(rest % static_cast<std::uint64_t>(q));
                    rest /= static_cast<std::uint64_t>(q);
                }
                gf_t b = static_cast<gf_t>(rest % static_cast<std::uint64_t>(q));
                gf_t a = static_cast<gf_t>(rest / static_cast<std::uint64_t>(q));
                tally[codeword_weight(sums, which, a, b, g)] += 1;
            }
        });
        return finish_weights(spec, shards);
    }

    if (which == CodeId::C1) {
        const std::uint64_t pairs = static_cast<std::uint64_t>(q) * static_cast<std::uint64_t>(q);
        unsigned __int128 est = static_cast<unsigned __int128>(pairs) *
                                static_cast<std::uint64_t>(sums.subfield_order()) *
                                static_cast<std::uint64_t>(par.s * par.s * par.s + 8);
        if (est > budget) throw BudgetExceeded("C1 weight sweep cost exceeds budget");
        std::vector<std::map<std::int64_t, std::uint64_t>> shards(static_cast<std::size_t>(workers));
        parallel_shards(pairs, workers, [&](int sh, std::uint64_t lo, std::uint64_t hi) {
            auto& tally = shards[sh];
            // weights per multiset of scaled-pair classes, computed once
            std::map<std::uint64_t, std::int64_t> cache;
            BigInt pt = big_pow(par.p, par.t);
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                gf_t a = static_cast<gf_t>(idx / static_cast<std::uint64_t>(q));
                gf_t b = static_cast<gf_t>(idx % static_cast<std::uint64_t>(q));
                std::uint64_t key = 0;
                for (int i = 1; i < sums.subfield_order(); ++i) {
                    gf_t w = sums.subfield_element(i);
                    key = key * 64 + static_cast<std::uint64_t>(sums.pair_class(F.mul(w, a), F.mul(w, b)));
                }
                auto it = cache.find(key);
                std::int64_t wgt;
                if (it != cache.end()) {
                    wgt = it->second;
                } else {
                    CycInt R(static_cast<int>(par.p));
                    std::uint64_t kk = key;
                    std::vector<int> cids;
                    for (int i = 1; i < sums.subfield_order(); ++i) {
                        cids.push_back(static_cast<int>(kk % 64));
                        kk /= 64;
                    }
                    for (int cid : cids) R = R + sums.class_value(cid);
                    if (!R.is_rational() || R.rational() % pt != 0)
                        throw NonIntegerWeight("C1 sweep: non-integral weight");
                    BigInt wb = (pt - 1) * big_pow(par.p, par.n - par.t) - R.rational() / pt;
                    wgt = wb.convert_to<std::int64_t>();
                    cache.emplace(key, wgt);
                }
                tally[wgt] += 1;
            }
        });
        return finish_weights(spec, shards);
    }

    // C2 via the pair sweep: bucket gamma by theta = Tr^n_t(f(x0)) just as in
    // the S-distribution sweep, then weights depend only on (class, theta).
    const std::uint64_t pairs = static_cast<std::uint64_t>(q) * static_cast<std::uint64_t>(q);
    unsigned __int128 est = static_cast<unsigned __int128>(pairs) *
                            static_cast<std::uint64_t>(q + par.s * par.s * par.s);
    if (est > budget) throw BudgetExceeded("C2 weight sweep cost exceeds budget");

    const int slots = sums.class_count();
    const int pt = sums.subfield_order();
    auto feasible = par.rank_deficits();
    std::vector<std::int64_t> wtab(static_cast<std::size_t>(slots) * pt, -1);
    for (int cid = 1; cid < slots; ++cid) {
        int deficit = sums.class_deficit(cid);
        bool possible = std::find(feasible.begin(), feasible.end(), deficit) != feasible.end() ||
                        deficit == static_cast<int>(par.s);  // rank 0, k of n/6 type
        if (!possible) continue;
        // rank-0 classes (k of n/6 type) only ever see theta = 0
        int th_hi = (deficit == static_cast<int>(par.s)) ? 1 : pt;
        for (int th = 0; th < th_hi; ++th) {
            // a (class, theta) combination can be vacuous (gamma count 0); its
            // formal weight may then fall outside [0, q-1]. Leave it at -1 and
            // let the sweep prove the bucket stays empty.
            try {
                wtab[static_cast<std::size_t>(cid) * pt + th] = weight_of_class_theta(sums, cid, th);
            } catch (const NonIntegerWeight&) {
            }
        }
    }
    const std::int64_t w_zero = (ipow_checked(par.p, par.t) - 1) * ipow_checked(par.p, par.n - par.t);

    const std::int64_t Q = F.Q;
    const auto& t3 = sums.term3_log();
    const auto& t1 = sums.term1_log();
    const auto& trt = sums.trt_idx_of_log();
    std::vector<std::map<std::int64_t, std::uint64_t>> shards(static_cast<std::size_t>(workers));
    parallel_shards(pairs - 1, workers, [&](int sh, std::uint64_t lo, std::uint64_t hi) {
        auto& tally = shards[sh];
        std::vector<std::uint64_t> cnt(static_cast<std::size_t>(pt), 0);
        for (std::uint64_t rest = lo; rest < hi; ++rest) {
            std::uint64_t idx = rest + 1;
            gf_t a = static_cast<gf_t>(idx / static_cast<std::uint64_t>(q));
            gf_t b = static_cast<gf_t>(idx % static_cast<std::uint64_t>(q));
            int cid = sums.pair_class(a, b);
            int w = sums.kernel_dim_of_class(cid);
            std::fill(cnt.begin(), cnt.end(), 0);
            cnt[0] += 1;  // x = 0
            const std::uint32_t la = (a == 0) ? 0 : F.log(a), lb = (b == 0) ? 0 : F.log(b);
            if (a != 0 && b != 0) {
                for (std::int64_t e = 0; e < Q; ++e) {
                    int i3 = trt[mod_add(la, t3[e], static_cast<std::uint32_t>(Q))];
                    int i1 = trt[mod_add(lb, t1[e], static_cast<std::uint32_t>(Q))];
                    cnt[static_cast<std::size_t>(sums.subfield_add_idx(i3, i1))] += 1;
                }
            } else if (a != 0) {
                for (std::int64_t e = 0; e < Q; ++e)
                    cnt[trt[mod_add(la, t3[e], static_cast<std::uint32_t>(Q))]] += 1;
            } else {
                for (std::int64_t e = 0; e < Q; ++e)
                    cnt[trt[mod_add(lb, t1[e], static_cast<std::uint32_t>(Q))]] += 1;
            }
            std::uint64_t q0w = 1;
            for (int i = 0; i < w; ++i) q0w *= static_cast<std::uint64_t>(par.q0);
            for (int th = 0; th < pt; ++th) {
                if (cnt[th] == 0) continue;
                if (cnt[th] % q0w != 0)
                    throw InternalCheckFailure("C2 sweep: theta bucket not divisible by q0^w");
                std::int64_t wv = wtab[static_cast<std::size_t>(cid) * pt + th];
                if (wv < 0) throw InternalCheckFailure("C2 sweep: unexpected class/theta bucket");
                tally[wv] += cnt[th] / q0w;
            }
            tally[w_zero] += static_cast<std::uint64_t>(q) - static_cast<std::uint64_t>(q) / q0w;
        }
    });
    shards[0][0] += 1;                                         // (0,0,0)
    shards[0][w_zero] += static_cast<std::uint64_t>(q - 1);    // (0,0,gamma != 0)
    return finish_weights(spec, shards);
}

WeightTable theorem_c1_weights(const ParamSet& par) {
    const std::int64_t p = par.p, n = par.n, d = par.d, t = par.t;
    auto P = [&](std::int64_t e) { return big_pow(p, e); };
    std::int64_t dim = (par.k_sixth && par.dprime == 2 * d) ? 3 * par.n0 / 2 : 2 * par.n0;
    std::map<std::int64_t, BigInt> acc;
    for (int i : par.rank_deficits())
        for (int eps : {1, -1}) {
            BigInt cnt = pair_class_size(par, i, eps);
            if (cnt == 0) continue;
            int r = static_cast<int>(par.s) - i;
            std::int64_t w;
            if ((d / t) % 2 == 1 && r % 2 == 1) {
                w = (ipow_checked(p, t) - 1) * ipow_checked(p, n - t);
            } else {
                std::int64_t e2 = n + static_cast<std::int64_t>(i) * d;
                if (e2 % 2 != 0) throw InternalCheckFailure("non-integral weight exponent");
                w = (ipow_checked(p, t) - 1) *
                    (ipow_checked(p, n - t) - eps * ipow_checked(p, e2 / 2 - t));
            }
            acc[w] += cnt;
        }
    acc[0] += 1;
    BigInt fiber = exact_div(P(2 * n), P(t * dim), "C1 fiber");
    WeightTable out;
    for (const auto& [w, c] : acc) out.add(w, exact_div(c, fiber, "C1 fiber multiplicity"));
    if (out.mass() != P(t * dim)) throw InternalCheckFailure("C1 closed-form mass mismatch");
    return out;
}

WeightTable theorem_c2_weights(const ParamSet& par) {
    if (par.k_sixth)
        throw InapplicableCase("the C2 weight table requires k not of n/6 type");
    const std::int64_t p = par.p, n = par.n, d = par.d, t = par.t, q = par.q;
    auto P = [&](std::int64_t e) { return big_pow(p, e); };
    const std::int64_t w0 = (ipow_checked(p, t) - 1) * ipow_checked(p, n - t);
    const BigInt pt1 = P(t) - 1;

    std::map<std::int64_t, BigInt> acc;
    acc[0] += 1;           // zero codeword
    acc[w0] += q - 1;      // (0,0,gamma != 0): S vanishes, R = 0
    for (int i : par.rank_deficits())
        for (int eps : {1, -1}) {
            BigInt cnt = pair_class_size(par, i, eps);
            if (cnt == 0) continue;
            int r = static_cast<int>(par.s) - i;
            const BigInt solvable = P(n - static_cast<std::int64_t>(i) * d);
            BigInt seen = 0;
            if ((d / t) % 2 == 1 && r % 2 == 1) {
                BigInt g0 = count_gamma_theorem(par, i, eps, 0);
                acc[w0] += cnt * g0;
                seen += g0;
                for (int qc : {1, -1}) {
                    BigInt ga = count_gamma_theorem(par, i, eps, qc);
                    std::int64_t e2 = n + static_cast<std::int64_t>(i) * d + t;
                    if (e2 % 2 != 0) throw InternalCheckFailure("non-integral C2 weight exponent");
                    std::int64_t w = w0 - eps * qc * ipow_checked(p, e2 / 2 - t);
                    BigInt rows = ga * ((P(t) - 1) / 2);
                    acc[w] += cnt * rows;
                    seen += rows;
                }
            } else {
                std::int64_t e2 = n + static_cast<std::int64_t>(i) * d;
                if (e2 % 2 != 0) throw InternalCheckFailure("non-integral C2 weight exponent");
                BigInt g0 = count_gamma_theorem(par, i, eps, 0);
                std::int64_t w_theta0 =
                    (ipow_checked(p, t) - 1) * (ipow_checked(p, n - t) - eps * ipow_checked(p, e2 / 2 - t));
                acc[w_theta0] += cnt * g0;
                seen += g0;
                BigInt ga = count_gamma_theorem(par, i, eps, 1);
                std::int64_t w_theta = w0 + eps * ipow_checked(p, e2 / 2 - t);
                acc[w_theta] += cnt * ga * pt1;
                seen += ga * pt1;
            }
            if (seen != solvable)
                throw InternalCheckFailure("C2 gamma counts do not exhaust the solvable shifts");
            acc[w0] += cnt * (BigInt(q) - solvable);
        }

    WeightTable out;
    for (const auto& [w, c] : acc) out.add(w, c);
    if (out.mass() != P(3 * n)) throw InternalCheckFailure("C2 closed-form mass mismatch");
    return out;
}

nlohmann::json CodeSpec::to_json(const FieldCtx& ctx) const {
    nlohmann::json j;
    j["which"] = which == CodeId::C1 ? "c1" : "c2";
    j["length"] = length;
    j["dim"] = dim;
    j["alphabet"] = ipow_checked(par.p, par.t);
    j["exponents"] = exponents;
    j["cosets"] = cosets;
    nlohmann::json hs = nlohmann::json::array();
    for (const auto& poly : h) {
        nlohmann::json coeffs = nlohmann::json::array();
        for (gf_t c : poly) {
            // print each F_{p^t} coefficient as its base-p digit vector
            nlohmann::json digs = nlohmann::json::array();
            std::int64_t code = c;
            for (std::int64_t i = 0; i < ctx.n; ++i) {
                digs.push_back(code % par.p);
                code /= par.p;
            }
            coeffs.push_back(digs);
        }
        hs.push_back(coeffs);
    }
    j["h"] = hs;
    return j;
}

}  // namespace dosum
