#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <utility>
#include <vector>

namespace pgsnf {

/// Dense matrix of arbitrary-precision integers.  No floating point is
/// involved anywhere; all operations are exact.
class IntegerMatrix {
  public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static IntegerMatrix identity(std::size_t n);
    static IntegerMatrix ones(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    mpz_class& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const mpz_class& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    IntegerMatrix transpose() const;
    bool is_zero() const;

    friend bool operator==(const IntegerMatrix& x, const IntegerMatrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<mpz_class> a_;
};

/// Exact product; throws std::invalid_argument on dimension mismatch.
IntegerMatrix mat_mul(const IntegerMatrix& a, const IntegerMatrix& b);

/// Exact linear combination sum_k coeff_k * M_k of same-shaped matrices.
IntegerMatrix identity_residual(const std::vector<std::pair<mpz_class, const IntegerMatrix*>>& terms);

/// True iff every entry of a - b is divisible by p^k.
bool congruent_mod(const IntegerMatrix& a, const IntegerMatrix& b, long p, int k);

IntegerMatrix operator-(const IntegerMatrix& a);

}  // namespace pgsnf
