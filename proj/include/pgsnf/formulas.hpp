#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <vector>

#include "pgsnf/divisor_profile.hpp"
#include "pgsnf/integer_matrix.hpp"

namespace pgsnf {

/// Coefficients d_k of (1 + x + ... + x^{p-1})^{n+1} for k = 0..(p-1)(n+1).
/// Built by two independent routes (polynomial self-multiplication and the
/// alternating binomial sum) which are required to agree.
struct CoefficientTable {
    long p = 0;
    int n_plus_1 = 0;
    std::vector<mpz_class> d;

    int degree() const { return static_cast<int>(p - 1) * n_plus_1; }
    mpz_class dk(long k) const {
        return (k < 0 || k > degree()) ? mpz_class(0) : d[static_cast<std::size_t>(k)];
    }
};

CoefficientTable dk_table(long p, int n_plus_1);

/// Gaussian binomial coefficient: the number of l-subspaces of an
/// m-dimensional space over a field with q elements.
mpz_class q_binomial(long m, long l, long q);

/// A t-tuple s with 1 <= s_i <= n and 0 <= p*s_{i+1} - s_i <= (p-1)(n+1)
/// (indices mod t), together with lambda_i = p*s_{i+1} - s_i and the
/// dimension value d = prod d_{lambda_i}.
struct HamadaTuple {
    std::vector<int> s;
    std::vector<long> lambda;
    mpz_class d;

    friend bool operator==(const HamadaTuple&, const HamadaTuple&) = default;
};

/// All Hamada tuples for (n, t, p) in lexicographic order.
std::vector<HamadaTuple> hamada_set(int n, int t, long p);

/// Tuples in {1,2,3}^t with exactly i coordinates equal to 2, lexicographic.
std::vector<std::vector<int>> tuples_with_twos(int t, int i);

/// Hamada tuples whose total deficiency sum max(0, s - s_i) equals alpha.
std::vector<HamadaTuple> deficiency_family(int alpha, int s, int n, int t, long p);

/// Hamada tuples whose total excess sum max(0, s_i - (n+1-r)) equals beta.
std::vector<HamadaTuple> excess_family(int beta, int r, int n, int t, long p);

/// Hamada tuples indexing the elementary divisor p^i of the product of the
/// r-vs-point and point-vs-s skew incidence matrices: deficiency alpha and
/// excess beta with alpha + beta = i, 0 <= alpha <= t(s-1), 0 <= beta <= t(r-1).
std::vector<HamadaTuple> exponent_family(int i, int r, int s, int n, int t, long p);

/// JSON array of integer arrays, e.g. [[1,2],[2,1]], in the given order.
std::string tuples_to_json(const std::vector<HamadaTuple>& family);
std::string tuples_to_json(const std::vector<std::vector<int>>& family);

/// Elementary divisor profile of the product A_{r,1} * A_{1,s} of skew
/// incidence matrices in an (n+1)-dimensional space over GF(p^t):
/// e_i = sum of d over exponent_family(i), plus the single top divisor
/// p^{t(r+s)}.
DivisorProfile product_divisor_profile(int n, int t, long p, int r, int s);

/// Multiplicities e_{2t+i}, 0 <= i <= t, of the skew-lines incidence matrix
/// of PG(3, p^t): e_{2t+i} = sum of d over the tuples with exactly i twos.
std::map<int, mpz_class> skew_lines_upper_divisors(int t, long p);

/// Complete elementary divisor profile of the skew-lines incidence matrix
/// of PG(3, q), q = p^t: the upper block e_{2t..3t} from the closed form,
/// e_i = e_{3t-i} for i < t, e_t fixed by sum e_{0..t} = q^4 + q^2, the top
/// divisor e_{4t} = 1, and zero everywhere else.
DivisorProfile skew_lines_divisor_profile(int t, long p);

/// Multiplicities e_i, 0 <= i < t, of the skew incidence matrix between
/// r-subspaces and s-subspaces itself; e_0 is its p-rank.
std::map<int, mpz_class> skew_incidence_low_divisors(int n, int t, long p, int r, int s);

/// Parameters and spectrum of the skew-lines graph of PG(3, q): a strongly
/// regular graph on the q^4 + q^3 + 2q^2 + q + 1 lines.
struct SrgSpectrum {
    long q = 0;
    long p = 0;
    int t = 0;
    mpz_class v, k, lam, mu;
    std::array<mpz_class, 3> eigenvalues;     // q, -q^2, q^4
    std::array<mpz_class, 3> multiplicities;  // q^4 + q^2, q^3 + q^2 + q, 1
};

/// Throws std::invalid_argument unless q is a prime power.
SrgSpectrum srg_spectrum(long q);

/// Residual of the adjacency equation of the skew-lines graph:
/// A^2 - q^4 I - (q^4-q^3-q^2+q) A - (q^4-q^3)(J - A - I).
IntegerMatrix skew_square_residual(const IntegerMatrix& a, long q);

/// Residual of the point-line product equation, with pr = B^t B:
/// pr - (q^3+q^2) I - (q^3+q^2-q-1) A - (q^3+q^2-q)(J - A - I).
IntegerMatrix point_product_residual(const IntegerMatrix& pr, const IntegerMatrix& a, long q);

}  // namespace pgsnf
