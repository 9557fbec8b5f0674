#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace pgsnf {

/// Multiplicities of the powers of a prime p among the elementary divisors
/// of a matrix: mult[i] = number of invariant factors whose p-part is p^i.
/// Zero multiplicities are never stored.
struct DivisorProfile {
    long p = 0;
    std::map<int, mpz_class> mult;

    mpz_class total() const;         // sum of multiplicities (= rank when complete)
    mpz_class weighted_sum() const;  // sum of i * e_i

    mpz_class get(int i) const;
    void add(int i, const mpz_class& e);

    friend bool operator==(const DivisorProfile&, const DivisorProfile&) = default;

    /// Canonical serialization: {"p":2,"multiplicities":{"0":6,"1":14}} with
    /// keys in ascending numeric order and zero entries omitted.
    std::string to_json() const;
    static DivisorProfile from_json(const std::string& text);
};

/// Histogram of p-adic valuations of a divisor chain.
DivisorProfile profile_from_chain(const std::vector<mpz_class>& divisors, long p);

}  // namespace pgsnf
