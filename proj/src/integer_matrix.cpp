#include "pgsnf/integer_matrix.hpp"

#include <stdexcept>

namespace pgsnf {

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntegerMatrix IntegerMatrix::ones(std::size_t rows, std::size_t cols) {
    IntegerMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = 1;
    return m;
}

IntegerMatrix IntegerMatrix::transpose() const {
    IntegerMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
}

bool IntegerMatrix::is_zero() const {
    for (const mpz_class& v : a_)
        if (v != 0) return false;
    return true;
}

IntegerMatrix mat_mul(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
    IntegerMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const mpz_class& aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                const mpz_class& bkj = b.at(k, j);
                if (bkj != 0) mpz_addmul(c.at(i, j).get_mpz_t(), aik.get_mpz_t(), bkj.get_mpz_t());
            }
        }
    return c;
}

IntegerMatrix identity_residual(const std::vector<std::pair<mpz_class, const IntegerMatrix*>>& terms) {
    if (terms.empty()) throw std::invalid_argument("empty linear combination");
    const std::size_t r = terms[0].second->rows(), c = terms[0].second->cols();
    IntegerMatrix out(r, c);
    for (const auto& [coeff, m] : terms) {
        if (m->rows() != r || m->cols() != c) throw std::invalid_argument("linear combination dimension mismatch");
        if (coeff == 0) continue;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                const mpz_class& v = m->at(i, j);
                if (v != 0) mpz_addmul(out.at(i, j).get_mpz_t(), coeff.get_mpz_t(), v.get_mpz_t());
            }
    }
    return out;
}

bool congruent_mod(const IntegerMatrix& a, const IntegerMatrix& b, long p, int k) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("congruence dimension mismatch");
    if (k < 0) throw std::invalid_argument("congruence exponent must be >= 0");
    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    mpz_class diff;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            diff = a.at(i, j) - b.at(i, j);
            if (!mpz_divisible_p(diff.get_mpz_t(), mod.get_mpz_t())) return false;
        }
    return true;
}

IntegerMatrix operator-(const IntegerMatrix& a) {
    IntegerMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = -a.at(i, j);
    return m;
}

}  // namespace pgsnf
