#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "dosum/cyclo.hpp"
#include "dosum/ints.hpp"

namespace dosum {

// Exact multiset tally: cyclotomic value -> positive count.
struct DistTable {
    std::map<CycInt, BigInt> tally;

    void add(const CycInt& v, const BigInt& count);
    void merge(const DistTable& o);
    BigInt mass() const;
    BigInt count_of(const CycInt& v) const;

    bool operator==(const DistTable& o) const { return tally == o.tally; }

    // Sorted by the canonical value order; counts as decimal strings.
    nlohmann::json to_json() const;
    static DistTable from_json(const nlohmann::json& j);
    std::string to_string() const;
};

// Hamming weight -> codeword count.
struct WeightTable {
    std::map<std::int64_t, BigInt> tally;

    void add(std::int64_t w, const BigInt& count);
    void merge(const WeightTable& o);
    BigInt mass() const;

    bool operator==(const WeightTable& o) const { return tally == o.tally; }

    nlohmann::json to_json() const;
    std::string to_csv() const;  // "weight,count" ascending
    std::string to_string() const;
};

}  // namespace dosum
