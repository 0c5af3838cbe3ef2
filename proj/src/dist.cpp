#include "dosum/dist.hpp"

#include <sstream>

namespace dosum {

namespace {
nlohmann::json count_json(const BigInt& v) { return nlohmann::json(v.str()); }
}  // namespace

void DistTable::add(const CycInt& v, const BigInt& count) {
    if (count == 0) return;
    if (count < 0) throw InternalCheckFailure("negative tally count for " + v.str());
    tally[v] += count;
}

void DistTable::merge(const DistTable& o) {
    for (const auto& [v, c] : o.tally) add(v, c);
}

BigInt DistTable::mass() const {
    BigInt m = 0;
    for (const auto& [v, c] : tally) m += c;
    return m;
}

BigInt DistTable::count_of(const CycInt& v) const {
    auto it = tally.find(v);
    return it == tally.end() ? BigInt(0) : it->second;
}

nlohmann::json DistTable::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [v, c] : tally)
        arr.push_back(nlohmann::json{{"value", v.to_json()}, {"count", count_json(c)}});
    return arr;
}

DistTable DistTable::from_json(const nlohmann::json& j) {
    DistTable t;
    for (const auto& row : j)
        t.add(CycInt::from_json(row.at("value")), BigInt(row.at("count").get<std::string>()));
    return t;
}

std::string DistTable::to_string() const {
    std::ostringstream os;
    for (const auto& [v, c] : tally) os << v.str() << " : " << c.str() << "\n";
    return os.str();
}

void WeightTable::add(std::int64_t w, const BigInt& count) {
    if (count == 0) return;
    if (count < 0) throw InternalCheckFailure("negative weight count");
    tally[w] += count;
}

void WeightTable::merge(const WeightTable& o) {
    for (const auto& [w, c] : o.tally) add(w, c);
}

BigInt WeightTable::mass() const {
    BigInt m = 0;
    for (const auto& [w, c] : tally) m += c;
    return m;
}

nlohmann::json WeightTable::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [w, c] : tally)
        arr.push_back(nlohmann::json{{"weight", w}, {"count", count_json(c)}});
    return arr;
}

std::string WeightTable::to_csv() const {
    std::ostringstream os;
    os << "weight,count\n";
    for (const auto& [w, c] : tally) os << w << "," << c.str() << "\n";
    return os.str();
}

std::string WeightTable::to_string() const {
    std::ostringstream os;
    for (const auto& [w, c] : tally) os << w << " : " << c.str() << "\n";
    return os.str();
}

}  // namespace dosum
