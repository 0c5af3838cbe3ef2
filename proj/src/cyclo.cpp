#include "dosum/cyclo.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "dosum/field.hpp"

namespace dosum {

void CycInt::check_same(const CycInt& o) const {
    if (p_ != o.p_) throw PrimeMismatch("cyclotomic elements over different primes");
}

CycInt CycInt::integer(int p, BigInt v) {
    CycInt r(p);
    r.c_[0] = std::move(v);
    return r;
}

CycInt CycInt::zeta_pow(int p, std::int64_t j) {
    std::vector<BigInt> raw(static_cast<std::size_t>(p), 0);
    j %= p;
    if (j < 0) j += p;
    raw[static_cast<std::size_t>(j)] = 1;
    return canon(p, raw);
}

CycInt CycInt::canon(int p, const std::vector<BigInt>& raw) {
    if (raw.size() != static_cast<std::size_t>(p))
        throw InternalCheckFailure("canon expects p raw coefficients");
    CycInt r(p);
    const BigInt& top = raw[static_cast<std::size_t>(p - 1)];
    for (int j = 0; j + 1 < p; ++j) r.c_[j] = raw[j] - top;
    return r;
}

bool CycInt::is_zero() const {
    for (const auto& v : c_)
        if (v != 0) return false;
    return true;
}

bool CycInt::is_rational() const {
    for (std::size_t j = 1; j < c_.size(); ++j)
        if (c_[j] != 0) return false;
    return true;
}

const BigInt& CycInt::rational() const {
    if (!is_rational()) throw InternalCheckFailure("value is not a rational integer: " + str());
    return c_[0];
}

CycInt CycInt::operator+(const CycInt& o) const {
    check_same(o);
    CycInt r(p_);
    for (std::size_t j = 0; j < c_.size(); ++j) r.c_[j] = c_[j] + o.c_[j];
    return r;
}

CycInt CycInt::operator-(const CycInt& o) const {
    check_same(o);
    CycInt r(p_);
    for (std::size_t j = 0; j < c_.size(); ++j) r.c_[j] = c_[j] - o.c_[j];
    return r;
}

CycInt CycInt::operator-() const {
    CycInt r(p_);
    for (std::size_t j = 0; j < c_.size(); ++j) r.c_[j] = -c_[j];
    return r;
}

CycInt CycInt::scaled(const BigInt& f) const {
    CycInt r(p_);
    for (std::size_t j = 0; j < c_.size(); ++j) r.c_[j] = c_[j] * f;
    return r;
}

CycInt CycInt::operator*(const CycInt& o) const {
    check_same(o);
    std::vector<BigInt> raw(static_cast<std::size_t>(p_), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) {
            if (o.c_[j] == 0) continue;
            raw[(i + j) % static_cast<std::size_t>(p_)] += c_[i] * o.c_[j];
        }
    }
    return canon(p_, raw);
}

CycInt CycInt::times_zeta(std::int64_t j) const {
    j %= p_;
    if (j < 0) j += p_;
    if (j == 0) return *this;
    std::vector<BigInt> raw(static_cast<std::size_t>(p_), 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        raw[(i + static_cast<std::size_t>(j)) % static_cast<std::size_t>(p_)] = c_[i];
    return canon(p_, raw);
}

bool CycInt::operator<(const CycInt& o) const {
    if (p_ != o.p_) return p_ < o.p_;
    for (std::size_t j = 0; j < c_.size(); ++j)
        if (c_[j] != o.c_[j]) return c_[j] < o.c_[j];
    return false;
}

std::string CycInt::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        if (!first) os << (c_[j] > 0 ? " + " : " - ");
        else if (c_[j] < 0) os << "-";
        BigInt av = abs(c_[j]);
        if (j == 0 || av != 1) os << av.str();
        if (j > 0) {
            os << "z";
            if (j > 1) os << "^" << j;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

std::complex<long double> CycInt::embed() const {
    const long double tau = 2.0L * 3.14159265358979323846264338327950288L;
    std::complex<long double> acc{0, 0};
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        long double coef = static_cast<long double>(c_[j].convert_to<double>());
        long double ang = tau * static_cast<long double>(j) / static_cast<long double>(p_);
        acc += coef * std::complex<long double>{std::cos(ang), std::sin(ang)};
    }
    return acc;
}

namespace {
nlohmann::json bigint_json(const BigInt& v) {
    // 53-bit-safe integers stay numeric, larger values go through strings
    static const BigInt lim = BigInt(1) << 53;
    if (v < lim && v > -lim) return nlohmann::json(v.convert_to<std::int64_t>());
    return nlohmann::json(v.str());
}
BigInt bigint_from_json(const nlohmann::json& j) {
    if (j.is_string()) return BigInt(j.get<std::string>());
    return BigInt(j.get<std::int64_t>());
}
}  // namespace

nlohmann::json CycInt::to_json() const {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& v : c_) coeffs.push_back(bigint_json(v));
    return nlohmann::json{{"p", p_}, {"coeffs", coeffs}};
}

CycInt CycInt::from_json(const nlohmann::json& j) {
    int p = j.at("p").get<int>();
    CycInt r(p);
    const auto& coeffs = j.at("coeffs");
    if (coeffs.size() != static_cast<std::size_t>(p - 1))
        throw InternalCheckFailure("coefficient list must have p-1 entries");
    for (int i = 0; i + 1 < p; ++i) r.c_[i] = bigint_from_json(coeffs[i]);
    return r;
}

const CycInt& gauss_sum(std::int64_t p, std::int64_t t) {
    static std::mutex mu;
    static std::map<std::pair<std::int64_t, std::int64_t>, CycInt> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, t);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    auto ctx = FieldCtx::get(p, t);
    std::vector<BigInt> raw(static_cast<std::size_t>(p), 0);
    for (std::int64_t x = 1; x < ctx->q; ++x) {
        int eta = ctx->quad_char_sub(static_cast<gf_t>(x), t);
        raw[static_cast<std::size_t>(ctx->trace1(static_cast<gf_t>(x)))] += eta;
    }
    auto g = CycInt::canon(static_cast<int>(p), raw);
    // G^2 = (-1)^{(p^t-1)/2} p^t, checked on every construction
    BigInt pstar_t = big_pow(p, t);
    if ((ctx->q - 1) / 2 % 2 == 1) pstar_t = -pstar_t;
    if (g * g != CycInt::integer(static_cast<int>(p), pstar_t))
        throw InternalCheckFailure("Gauss sum square identity failed");
    return cache.emplace(key, std::move(g)).first->second;
}

CycInt closed_value(std::int64_t p, ValueKind kind, int eps, std::int64_t e, std::int64_t j) {
    BigInt mag = big_pow(p, e);
    if (eps < 0) mag = -mag;
    CycInt v = CycInt::integer(static_cast<int>(p), mag);
    if (kind == ValueKind::SqrtPstarPower) v = v * gauss_sum(p, 1);
    if (j != 0) v = v.times_zeta(j);
    return v;
}

}  // namespace dosum
