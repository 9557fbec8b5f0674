#pragma once

#include <gmpxx.h>

#include <vector>

#include "pgsnf/divisor_profile.hpp"
#include "pgsnf/integer_matrix.hpp"

namespace pgsnf {

/// Full Smith normal form over the integers by gcd pivoting: returns the
/// invariant factor chain d_1 | d_2 | ... | d_k (all positive, k = rank).
/// Exact arbitrary-precision arithmetic throughout; intended as the
/// independent oracle for the p-local route below.
std::vector<mpz_class> smith_normal_form(const IntegerMatrix& m);

/// Multiplicities of p^i among the elementary divisors of m, computed by
/// p-local elimination: entries are reduced modulo p^K, pivots are chosen
/// with minimal p-adic valuation (ties broken by smallest (row, col)), and
/// each pivot's unit part is cancelled by a modular inverse.  K starts at
/// precision_hint (or a default) and doubles until the detected rank reaches
/// an independently computed rank bound and the profile is stable under a
/// further doubling.
DivisorProfile p_elementary_divisors(const IntegerMatrix& m, long p, int precision_hint = 0);

/// Rank of m over Z/p (p prime, p < 2^31); equals the multiplicity of p^0
/// among the elementary divisors.
long p_rank(const IntegerMatrix& m, long p);

namespace detail {
/// Rank of a row-major residue matrix over Z/p; consumes the buffer.
long residue_rank(std::vector<std::uint64_t>& a, std::size_t rows, std::size_t cols, long p);
}  // namespace detail

}  // namespace pgsnf
