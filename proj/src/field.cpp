#include "dosum/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include "dosum/ints.hpp"

namespace dosum {

namespace {

// Dense polynomial arithmetic over F_p for the modulus search only.
using Poly = std::vector<int>;  // ascending coefficients

Poly pol_trim(Poly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

Poly pol_mulmod(const Poly& a, const Poly& b, const Poly& mod, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::int64_t> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += static_cast<std::int64_t>(a[i]) * b[j];
    }
    std::size_t deg_mod = mod.size() - 1;
    for (std::size_t i = acc.size(); i-- > deg_mod;) {
        std::int64_t c = acc[i] % p;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= deg_mod; ++j)
            acc[i - deg_mod + j] -= c * mod[j];
        acc[i] = 0;
    }
    Poly r(deg_mod, 0);
    for (std::size_t i = 0; i < deg_mod && i < acc.size(); ++i)
        r[i] = static_cast<int>(((acc[i] % p) + p) % p);
    return pol_trim(r);
}

Poly pol_powmod(Poly base, std::int64_t e, const Poly& mod, std::int64_t p) {
    Poly r{1};
    while (e) {
        if (e & 1) r = pol_mulmod(r, base, mod, p);
        base = pol_mulmod(base, base, mod, p);
        e >>= 1;
    }
    return r;
}

Poly pol_gcd(Poly a, Poly b, std::int64_t p) {
    auto inv_mod_p = [&](std::int64_t v) {
        std::int64_t r = 1, x = v % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * x % p;
            x = x * x % p;
            e >>= 1;
        }
        return r;
    };
    a = pol_trim(std::move(a));
    b = pol_trim(std::move(b));
    while (!b.empty()) {
        // a mod b
        std::int64_t lead_inv = inv_mod_p(b.back());
        while (a.size() >= b.size()) {
            std::int64_t c = a.back() * lead_inv % p;
            std::size_t off = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[off + i] = static_cast<int>((((a[off + i] - c * b[i]) % p) + p) % p);
            a = pol_trim(std::move(a));
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

std::vector<std::int64_t> prime_factors(std::int64_t v) {
    std::vector<std::int64_t> fs;
    for (std::int64_t d = 2; d * d <= v; ++d) {
        if (v % d == 0) {
            fs.push_back(d);
            while (v % d == 0) v /= d;
        }
    }
    if (v > 1) fs.push_back(v);
    return fs;
}

bool is_irreducible(const Poly& mod, std::int64_t p, std::int64_t n) {
    // x^{p^n} = x mod M, and gcd(x^{p^{n/l}} - x, M) = 1 for prime l | n
    Poly x{0, 1};
    Poly fr = x;
    std::vector<Poly> frob_pow(n + 1);  // x^{p^j} mod M
    frob_pow[0] = x;
    for (std::int64_t j = 1; j <= n; ++j)
        frob_pow[j] = pol_powmod(frob_pow[j - 1], p, mod, p);
    if (pol_trim(frob_pow[n]) != pol_trim(x)) return false;
    for (std::int64_t l : prime_factors(n)) {
        Poly diff = frob_pow[n / l];
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = static_cast<int>(((diff[1] - 1) % p + p) % p);
        diff = pol_trim(std::move(diff));
        Poly g = pol_gcd(diff, mod, p);
        if (!(g.size() == 1)) return false;
    }
    return true;
}

bool x_is_primitive(const Poly& mod, std::int64_t p, std::int64_t Q) {
    Poly x{0, 1};
    for (std::int64_t l : prime_factors(Q)) {
        Poly r = pol_powmod(x, Q / l, mod, p);
        if (r == Poly{1}) return false;
    }
    return true;
}

}  // namespace

std::uint64_t FieldCtx::nibble_add(std::uint64_t a, std::uint64_t b, int p) {
    constexpr std::uint64_t ones = 0x1111111111111111ull;
    std::uint64_t t = a + b;  // per-nibble sums <= 2(p-1) <= 12, no carries
    std::uint64_t flag = ((t + (8 - p) * ones) & (ones << 3)) >> 3;  // 1 where sum >= p
    return t - flag * static_cast<std::uint64_t>(p);
}

void FieldCtx::build(std::int64_t pp, std::int64_t nn) {
    p = pp;
    n = nn;
    if (p < 3 || p % 2 == 0 || !is_prime_u64(static_cast<std::uint64_t>(p)))
        throw NotOddPrime("p must be an odd prime");
    if (n < 1) throw ValidationError("n must be positive");
    q = 1;
    for (std::int64_t i = 0; i < n; ++i) {
        q *= p;
        if (q > kMaxQ) throw TooLarge("field size p^n exceeds the table guard 2^26");
    }
    Q = q - 1;

    // Smallest monic primitive modulus in packed-code order.
    Poly mod;
    for (std::int64_t code = 0; code < q; ++code) {
        Poly cand(n + 1, 0);
        cand[n] = 1;
        std::int64_t c = code;
        for (std::int64_t i = 0; i < n; ++i) {
            cand[i] = static_cast<int>(c % p);
            c /= p;
        }
        if (n > 1 && !is_irreducible(cand, p, n)) continue;
        if (n == 1 && cand[0] == 0) continue;  // x itself: pi = 0
        if (!x_is_primitive(cand, p, Q)) continue;
        mod = cand;
        break;
    }
    if (mod.empty()) throw InternalCheckFailure("no primitive modulus found");
    modulus = mod;

    // exp table by repeated multiplication by pi = X: shift and reduce.
    exp_.assign(static_cast<std::size_t>(2 * Q), 0);
    log_.assign(static_cast<std::size_t>(q), kLogZero);
    std::vector<int> cur(n, 0);
    cur[0] = 1;
    auto pack = [&](const std::vector<int>& digs) {
        gf_t code = 0;
        for (std::int64_t i = n - 1; i >= 0; --i) code = static_cast<gf_t>(code * p + digs[i]);
        return code;
    };
    for (std::int64_t e = 0; e < Q; ++e) {
        gf_t code = pack(cur);
        exp_[e] = code;
        if (log_[code] != kLogZero) throw InternalCheckFailure("pi is not primitive (cycle too short)");
        log_[code] = static_cast<std::uint32_t>(e);
        // multiply by X mod modulus
        int carry = cur[n - 1];
        for (std::int64_t i = n - 1; i > 0; --i) cur[i] = cur[i - 1];
        cur[0] = 0;
        if (carry) {
            for (std::int64_t i = 0; i < n; ++i)
                cur[i] = static_cast<int>(((cur[i] - static_cast<std::int64_t>(carry) * modulus[i]) % p + p) % p);
        }
    }
    if (pack(cur) != 1) throw InternalCheckFailure("pi^(q-1) != 1");
    for (std::int64_t e = 0; e < Q; ++e) exp_[Q + e] = exp_[e];

    pjq_.assign(n, 0);
    pjq_[0] = 1 % Q;
    for (std::int64_t j = 1; j < n; ++j) pjq_[j] = pjq_[j - 1] * static_cast<std::uint64_t>(p) % Q;

    if (p <= 7 && n <= 16) {
        nib_.assign(static_cast<std::size_t>(q), 0);
        for (std::int64_t code = 0; code < q; ++code) {
            std::uint64_t nibbles = 0;
            std::int64_t c = code;
            for (std::int64_t i = 0; i < n; ++i) {
                nibbles |= static_cast<std::uint64_t>(c % p) << (4 * i);
                c /= p;
            }
            nib_[code] = nibbles;
        }
    }

    // Tr^n_1 on the power basis, extended linearly.
    std::vector<int> tr_basis(n);
    for (std::int64_t i = 0; i < n; ++i) {
        gf_t acc = 0;
        gf_t x = (i == 0) ? 1 : exp_[i];
        for (std::int64_t j = 0; j < n; ++j) acc = add(acc, frob(x, j));
        if (acc >= static_cast<gf_t>(p)) throw InternalCheckFailure("trace not in prime field");
        tr_basis[i] = static_cast<int>(acc);
    }
    tr1_.assign(static_cast<std::size_t>(q), 0);
    for (std::int64_t code = 0; code < q; ++code) {
        std::int64_t c = code, acc = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            acc += (c % p) * tr_basis[i];
            c /= p;
        }
        tr1_[code] = static_cast<std::uint8_t>(acc % p);
    }

    zech_.assign(static_cast<std::size_t>(Q), 0);
    for (std::int64_t e = 0; e < Q; ++e) {
        gf_t v = add(1, exp_[e]);
        zech_[e] = (v == 0) ? kZechNeg : log_[v];
    }
}

gf_t FieldCtx::add(gf_t a, gf_t b) const {
    if (!nib_.empty()) {
        std::uint64_t r = nibble_add(nib_[a], nib_[b], static_cast<int>(p));
        gf_t code = 0;
        for (std::int64_t i = n - 1; i >= 0; --i)
            code = static_cast<gf_t>(code * p + ((r >> (4 * i)) & 0xf));
        return code;
    }
    gf_t code = 0;
    std::int64_t mul = 1, aa = a, bb = b;
    for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t dig = (aa % p + bb % p) % p;
        code += static_cast<gf_t>(dig * mul);
        mul *= p;
        aa /= p;
        bb /= p;
    }
    return code;
}

gf_t FieldCtx::neg(gf_t a) const {
    gf_t code = 0;
    std::int64_t mul = 1, aa = a;
    for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t dig = (p - aa % p) % p;
        code += static_cast<gf_t>(dig * mul);
        mul *= p;
        aa /= p;
    }
    return code;
}

gf_t FieldCtx::inv(gf_t a) const {
    if (a == 0) throw InternalCheckFailure("inverse of zero");
    std::uint32_t e = log_[a];
    return e == 0 ? 1 : exp_[Q - e];
}

gf_t FieldCtx::scalar(std::int64_t c) const {
    c %= p;
    if (c < 0) c += p;
    return static_cast<gf_t>(c);
}

gf_t FieldCtx::pow(gf_t x, std::int64_t e) const {
    if (x == 0) return e == 0 ? 1 : 0;
    if (e < 0) throw InternalCheckFailure("negative exponent");
    std::uint64_t ee = static_cast<std::uint64_t>(e) % static_cast<std::uint64_t>(Q);
    return exp_[static_cast<std::uint64_t>(log_[x]) * ee % static_cast<std::uint64_t>(Q)];
}

gf_t FieldCtx::trace_to(gf_t x, std::int64_t j) const {
    if (j < 1 || n % j != 0) throw JNotDividingN("trace target degree must divide n");
    gf_t acc = 0;
    gf_t cur = x;
    for (std::int64_t i = 0; i < n / j; ++i) {
        acc = add(acc, cur);
        cur = frob(cur, j);
    }
    return acc;
}

int FieldCtx::subfield_trace1(gf_t u, std::int64_t j) const {
    if (!in_subfield(u, j)) throw InternalCheckFailure("subfield_trace1: element outside F_{p^j}");
    gf_t acc = 0;
    gf_t cur = u;
    for (std::int64_t i = 0; i < j; ++i) {
        acc = add(acc, cur);
        cur = frob(cur, 1);
    }
    if (acc >= static_cast<gf_t>(p)) throw InternalCheckFailure("subfield trace escaped F_p");
    return static_cast<int>(acc);
}

bool FieldCtx::in_subfield(gf_t x, std::int64_t j) const {
    if (j < 1 || n % j != 0) throw JNotDividingN("subfield degree must divide n");
    if (x == 0) return true;
    std::int64_t sub_ord = ipow_checked(p, j) - 1;
    return log_[x] % (Q / sub_ord) == 0;
}

int FieldCtx::quad_char_sub(gf_t x, std::int64_t j) const {
    if (x == 0) return 0;
    std::int64_t sub_ord = ipow_checked(p, j) - 1;
    std::int64_t step = Q / sub_ord;
    if (log_[x] % step != 0) throw InternalCheckFailure("element not in stated subfield");
    return (log_[x] / step) % 2 == 0 ? 1 : -1;
}

std::shared_ptr<const FieldCtx> FieldCtx::get(std::int64_t p, std::int64_t n) {
    static std::mutex mu;
    static std::map<std::pair<std::int64_t, std::int64_t>, std::shared_ptr<const FieldCtx>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
    ctx->build(p, n);
    cache[key] = ctx;
    return ctx;
}

}  // namespace dosum
