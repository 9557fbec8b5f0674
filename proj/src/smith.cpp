#include "pgsnf/smith.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

#include "pgsnf/field.hpp"

namespace pgsnf {

namespace {

// Flat working copy with row/column operations.
struct Work {
    std::size_t m, n;
    std::vector<mpz_class> a;

    explicit Work(const IntegerMatrix& src) : m(src.rows()), n(src.cols()), a(m * n) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) a[i * n + j] = src.at(i, j);
    }

    mpz_class& at(std::size_t i, std::size_t j) { return a[i * n + j]; }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < n; ++c) std::swap(at(i, c), at(j, c));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < m; ++r) std::swap(at(r, i), at(r, j));
    }
};

long valuation(const mpz_class& x, unsigned long p, const mpz_class& p_z) {
    if (mpz_tdiv_ui(x.get_mpz_t(), p) != 0) return 0;
    mpz_class tmp;
    return static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.get_mpz_t(), p_z.get_mpz_t()));
}

// Pivot valuations found by elimination over Z/p^K with minimal-valuation
// pivoting.  Valuations >= K are indistinguishable from zero at this
// precision; the caller is responsible for choosing K large enough.
std::vector<long> local_valuations(const IntegerMatrix& input, long p, int K) {
    const unsigned long pu = static_cast<unsigned long>(p);
    const mpz_class p_z = p;
    mpz_class pK;
    mpz_ui_pow_ui(pK.get_mpz_t(), pu, static_cast<unsigned long>(K));

    Work w(input);
    for (auto& v : w.a) mpz_mod(v.get_mpz_t(), v.get_mpz_t(), pK.get_mpz_t());

    std::vector<long> vals;
    const std::size_t steps = std::min(w.m, w.n);
    mpz_class u, uinv, f, t;

    for (std::size_t k = 0; k < steps; ++k) {
        long best_v = LONG_MAX;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = k; i < w.m && best_v > 0; ++i)
            for (std::size_t j = k; j < w.n; ++j) {
                const mpz_class& x = w.at(i, j);
                if (x == 0) continue;
                const long v = valuation(x, pu, p_z);
                if (v < best_v) {
                    best_v = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        if (best_v == LONG_MAX) break;

        w.swap_rows(k, bi);
        w.swap_cols(k, bj);

        mpz_class pv;
        mpz_ui_pow_ui(pv.get_mpz_t(), pu, static_cast<unsigned long>(best_v));
        mpz_divexact(u.get_mpz_t(), w.at(k, k).get_mpz_t(), pv.get_mpz_t());
        if (mpz_invert(uinv.get_mpz_t(), u.get_mpz_t(), pK.get_mpz_t()) == 0)
            throw std::logic_error("pivot unit part not invertible");

        for (std::size_t i = k + 1; i < w.m; ++i) {
            mpz_class& lead = w.at(i, k);
            if (lead == 0) continue;
            mpz_divexact(f.get_mpz_t(), lead.get_mpz_t(), pv.get_mpz_t());
            f *= uinv;
            mpz_mod(f.get_mpz_t(), f.get_mpz_t(), pK.get_mpz_t());
            for (std::size_t j = k; j < w.n; ++j) {
                const mpz_class& pivot_row = w.at(k, j);
                if (pivot_row == 0) continue;
                mpz_class& cell = w.at(i, j);
                mpz_submul(cell.get_mpz_t(), f.get_mpz_t(), pivot_row.get_mpz_t());
                mpz_mod(cell.get_mpz_t(), cell.get_mpz_t(), pK.get_mpz_t());
            }
        }
        // Clearing the rest of row k needs column operations that only touch
        // row k itself (column k is zero below the pivot), so the remaining
        // submatrix is already the Schur complement.
        vals.push_back(best_v);
    }
    return vals;
}

long modinv(long a, long p) {
    long t = 0, newt = 1, r = p, newr = a % p;
    if (newr < 0) newr += p;
    while (newr != 0) {
        const long q = r / newr;
        t -= q * newt;
        std::swap(t, newt);
        r -= q * newr;
        std::swap(r, newr);
    }
    if (t < 0) t += p;
    return t;
}

}  // namespace

long p_rank(const IntegerMatrix& m, long p) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (p >= (1L << 31)) throw std::invalid_argument("p-rank supports primes below 2^31");
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::uint64_t> a(rows * cols);
    const unsigned long pu = static_cast<unsigned long>(p);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a[i * cols + j] = mpz_fdiv_ui(m.at(i, j).get_mpz_t(), pu);
    return detail::residue_rank(a, rows, cols, p);
}

long detail::residue_rank(std::vector<std::uint64_t>& a, std::size_t rows, std::size_t cols, long p) {
    const unsigned long pu = static_cast<unsigned long>(p);
    long rank = 0;
    for (std::size_t col = 0; col < cols && static_cast<std::size_t>(rank) < rows; ++col) {
        std::size_t prow = rows;
        for (std::size_t i = rank; i < rows; ++i)
            if (a[i * cols + col] != 0) {
                prow = i;
                break;
            }
        if (prow == rows) continue;
        if (prow != static_cast<std::size_t>(rank))
            for (std::size_t j = col; j < cols; ++j) std::swap(a[prow * cols + j], a[rank * cols + j]);
        const std::uint64_t pinv = static_cast<std::uint64_t>(modinv(static_cast<long>(a[rank * cols + col]), p));
        for (std::size_t i = rank + 1; i < rows; ++i) {
            const std::uint64_t lead = a[i * cols + col];
            if (lead == 0) continue;
            const std::uint64_t factor = (lead * pinv) % pu;
            const std::uint64_t negf = pu - factor;
            for (std::size_t j = col; j < cols; ++j)
                a[i * cols + j] = (a[i * cols + j] + negf * a[rank * cols + j]) % pu;
        }
        ++rank;
    }
    return rank;
}

namespace {

// Fraction-free elimination: exact rank and the determinant (up to sign) of
// the pivoted rank x rank submatrix.  Entries stay minor-sized.
std::pair<std::size_t, mpz_class> bareiss_rank_det(const IntegerMatrix& input) {
    Work w(input);
    mpz_class prev = 1, t;
    std::size_t rank = 0;
    for (std::size_t k = 0; k < std::min(w.m, w.n); ++k) {
        std::size_t bi = w.m, bj = 0;
        for (std::size_t i = k; i < w.m && bi == w.m; ++i)
            for (std::size_t j = k; j < w.n; ++j)
                if (w.at(i, j) != 0) {
                    bi = i;
                    bj = j;
                    break;
                }
        if (bi == w.m) break;
        w.swap_rows(k, bi);
        w.swap_cols(k, bj);
        for (std::size_t i = k + 1; i < w.m; ++i) {
            for (std::size_t j = k + 1; j < w.n; ++j) {
                t = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
                mpz_divexact(w.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            w.at(i, k) = 0;
        }
        prev = w.at(k, k);
        ++rank;
    }
    return {rank, abs(prev)};
}

void reduce_balanced(mpz_class& x, const mpz_class& modulus, const mpz_class& half) {
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
    if (x > half) x -= modulus;
}

}  // namespace

std::vector<mpz_class> smith_normal_form(const IntegerMatrix& input) {
    // The invariant factors all divide the determinant of any nonsingular
    // rank x rank submatrix, so once such a determinant R is known the whole
    // elimination can be carried out with entries reduced mod R: adjusting
    // any entry by a multiple of R neither changes the row lattice plus
    // R*Z^n nor, therefore, the nonzero invariant factors of the matrix
    // stacked on top of R*I.  Without this reduction the gcd-pivot
    // elimination swells exponentially on dense inputs.
    const auto [rank, big_r] = bareiss_rank_det(input);
    if (rank == 0) return {};

    const std::size_t n = input.cols();
    IntegerMatrix stacked(input.rows() + n, n);
    for (std::size_t i = 0; i < input.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) stacked.at(i, j) = input.at(i, j);
    for (std::size_t j = 0; j < n; ++j) stacked.at(input.rows() + j, j) = big_r;

    Work w(stacked);
    const mpz_class half = big_r / 2;
    for (auto& v : w.a) reduce_balanced(v, big_r, half);

    std::vector<mpz_class> divs;
    const std::size_t steps = std::min(w.m, w.n);
    mpz_class q, r;

    std::vector<std::size_t> nnz_row(w.m), nnz_col(w.n);
    for (std::size_t k = 0; k < steps; ++k) {
        // Pivot choice: least magnitude first, then least Markowitz fill
        // (nnz_row - 1)(nnz_col - 1), then smallest (row, col).  Magnitude
        // alone lets entries of this elimination grow explosively on
        // incidence-type inputs; the fill tie-break keeps them flat.
        std::fill(nnz_row.begin() + k, nnz_row.end(), 0);
        std::fill(nnz_col.begin() + k, nnz_col.end(), 0);
        for (std::size_t i = k; i < w.m; ++i)
            for (std::size_t j = k; j < w.n; ++j)
                if (w.at(i, j) != 0) {
                    ++nnz_row[i];
                    ++nnz_col[j];
                }
        bool found = false;
        std::size_t bi = k, bj = k, best_fill = 0;
        mpz_class best;
        for (std::size_t i = k; i < w.m; ++i)
            for (std::size_t j = k; j < w.n; ++j) {
                const mpz_class& x = w.at(i, j);
                if (x == 0) continue;
                mpz_class ax = abs(x);
                const std::size_t fill = (nnz_row[i] - 1) * (nnz_col[j] - 1);
                if (!found || ax < best || (ax == best && fill < best_fill)) {
                    found = true;
                    best = std::move(ax);
                    best_fill = fill;
                    bi = i;
                    bj = j;
                }
            }
        if (!found) break;
        w.swap_rows(k, bi);
        w.swap_cols(k, bj);

        for (;;) {
            bool clean = true;
            for (std::size_t i = k + 1; i < w.m; ++i) {
                if (w.at(i, k) == 0) continue;
                mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), w.at(i, k).get_mpz_t(), w.at(k, k).get_mpz_t());
                if (q != 0)
                    for (std::size_t j = k; j < w.n; ++j) {
                        mpz_submul(w.at(i, j).get_mpz_t(), q.get_mpz_t(), w.at(k, j).get_mpz_t());
                        reduce_balanced(w.at(i, j), big_r, half);
                    }
                if (w.at(i, k) != 0) {  // remainder: a strictly smaller pivot
                    w.swap_rows(k, i);
                    clean = false;
                }
            }
            for (std::size_t j = k + 1; j < w.n; ++j) {
                if (w.at(k, j) == 0) continue;
                mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), w.at(k, j).get_mpz_t(), w.at(k, k).get_mpz_t());
                if (q != 0)
                    for (std::size_t i = k; i < w.m; ++i) {
                        mpz_submul(w.at(i, j).get_mpz_t(), q.get_mpz_t(), w.at(i, k).get_mpz_t());
                        reduce_balanced(w.at(i, j), big_r, half);
                    }
                if (w.at(k, j) != 0) {
                    w.swap_cols(k, j);
                    clean = false;
                }
            }
            if (clean) break;
        }
        divs.push_back(abs(w.at(k, k)));
    }

    // Diagonal entries are only meaningful as gcds with R; submatrix blocks
    // that vanished mod R stand for divisors equal to R itself.
    mpz_class g, l;
    for (mpz_class& d : divs) {
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), big_r.get_mpz_t());
        d = g;
    }
    divs.resize(n, big_r);

    // diag(a, b) is equivalent to diag(gcd(a, b), lcm(a, b)); bubbling
    // adjacent pairs sorts every prime's exponents and yields the chain.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i + 1 < divs.size(); ++i) {
            if (mpz_divisible_p(divs[i + 1].get_mpz_t(), divs[i].get_mpz_t())) continue;
            mpz_gcd(g.get_mpz_t(), divs[i].get_mpz_t(), divs[i + 1].get_mpz_t());
            mpz_divexact(l.get_mpz_t(), divs[i].get_mpz_t(), g.get_mpz_t());
            l *= divs[i + 1];
            divs[i] = g;
            divs[i + 1] = l;
            changed = true;
        }
    }

    // The n - rank padding rows contributed divisors equal to R; the true
    // chain is the leading rank entries.
    divs.resize(rank);
    return divs;
}

DivisorProfile p_elementary_divisors(const IntegerMatrix& m, long p, int precision_hint) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    DivisorProfile profile;
    profile.p = p;
    if (m.rows() == 0 || m.cols() == 0) return profile;

    // Lower bound on the rank over Q, i.e. on the number of nonzero
    // elementary divisors the local elimination must account for.
    long rank_lb = 0;
    for (long aux : {1000003L, 1000033L}) rank_lb = std::max(rank_lb, p_rank(m, aux == p ? 1000211L : aux));

    int K = precision_hint > 0 ? precision_hint : 16;
    constexpr int kMaxPrecision = 1 << 14;
    std::vector<long> vals = local_valuations(m, p, K);
    for (;;) {
        std::vector<long> refined = local_valuations(m, p, 2 * K);
        if (static_cast<long>(vals.size()) >= rank_lb && refined == vals) break;
        K *= 2;
        vals = std::move(refined);
        if (K > kMaxPrecision) throw std::runtime_error("p-local elimination did not stabilize");
    }

    for (long v : vals) profile.add(static_cast<int>(v), 1);
    return profile;
}

}  // namespace pgsnf
