#include "pgsnf/subspaces.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pgsnf/integer_matrix.hpp"
#include "pgsnf/formulas.hpp"
#include "pgsnf/smith.hpp"

namespace pgsnf {

GeometryContext make_geometry(long p, int t, int n_plus_1) {
    if (n_plus_1 < 2) throw std::invalid_argument("ambient dimension n+1 must be >= 2");
    return GeometryContext{make_field(p, t), n_plus_1};
}

// Hard cap against accidental memory blowups; the intended scale tops out
// at the 7462 lines of PG(3,9).
constexpr std::size_t kMaxSubspaces = 5'000'000;

std::vector<Subspace> enumerate_subspaces(const GeometryContext& geo, int r) {
    const int n1 = geo.n_plus_1;
    const long q = geo.field->q();
    if (r < 0 || r > n1)
        throw std::invalid_argument("subspace dimension " + std::to_string(r) + " out of range [0, " +
                                    std::to_string(n1) + "]");
    std::vector<Subspace> out;
    if (r == 0) {
        out.push_back(Subspace{0, n1, {}, {}});
        return out;
    }

    const mpz_class expected = q_binomial(n1, r, q);
    if (expected > static_cast<unsigned long>(kMaxSubspaces))
        throw std::invalid_argument("subspace enumeration would produce " + expected.get_str() +
                                    " elements, above the cap " + std::to_string(kMaxSubspaces));
    out.reserve(expected.get_ui());

    std::vector<int> piv(r);
    for (int i = 0; i < r; ++i) piv[i] = i;
    std::vector<bool> is_pivot(n1);
    std::vector<std::pair<int, int>> free_pos;

    for (;;) {
        std::fill(is_pivot.begin(), is_pivot.end(), false);
        for (int c : piv) is_pivot[c] = true;
        free_pos.clear();
        for (int i = 0; i < r; ++i)
            for (int j = piv[i] + 1; j < n1; ++j)
                if (!is_pivot[j]) free_pos.emplace_back(i, j);

        const std::size_t f = free_pos.size();
        std::vector<std::uint32_t> digits(f, 0);
        for (;;) {
            Subspace sp;
            sp.dim = r;
            sp.width = n1;
            sp.pivots = piv;
            sp.basis.assign(static_cast<std::size_t>(r) * n1, 0);
            for (int i = 0; i < r; ++i) sp.basis[static_cast<std::size_t>(i) * n1 + piv[i]] = 1;
            for (std::size_t k = 0; k < f; ++k)
                sp.basis[static_cast<std::size_t>(free_pos[k].first) * n1 + free_pos[k].second] = digits[k];
            out.push_back(std::move(sp));

            // ascending base-q value with the first free position most
            // significant: increment the last digit first
            std::size_t k = f;
            while (k > 0 && ++digits[k - 1] == static_cast<std::uint32_t>(q)) digits[--k] = 0;
            if (k == 0) break;
        }

        // next pivot-column combination in lexicographic order
        int i = r - 1;
        while (i >= 0 && piv[i] == n1 - r + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int j = i + 1; j < r; ++j) piv[j] = piv[j - 1] + 1;
    }
    return out;
}

namespace {

// Rank of an nrows x ncols matrix of element indices, destroying buf.
int rank_in_place(std::uint32_t* buf, int nrows, int ncols, const FieldContext& F) {
    int rank = 0;
    for (int col = 0; col < ncols && rank < nrows; ++col) {
        int prow = -1;
        for (int i = rank; i < nrows; ++i)
            if (buf[i * ncols + col] != 0) {
                prow = i;
                break;
            }
        if (prow < 0) continue;
        if (prow != rank)
            for (int j = col; j < ncols; ++j) std::swap(buf[prow * ncols + j], buf[rank * ncols + j]);
        const std::uint32_t pinv = F.inv_idx(buf[rank * ncols + col]);
        for (int i = rank + 1; i < nrows; ++i) {
            const std::uint32_t v = buf[i * ncols + col];
            if (v == 0) continue;
            const std::uint32_t factor = F.mul_idx(v, pinv);
            buf[i * ncols + col] = 0;
            for (int j = col + 1; j < ncols; ++j) {
                const std::uint32_t w = buf[rank * ncols + j];
                if (w != 0)
                    buf[i * ncols + j] = F.sub_idx(buf[i * ncols + j], F.mul_idx(factor, w));
            }
        }
        ++rank;
    }
    return rank;
}

int stacked_rank(const Subspace& u, const Subspace& w, const FieldContext& F, std::vector<std::uint32_t>& scratch) {
    const int ncols = u.width;
    const int nrows = u.dim + w.dim;
    scratch.resize(static_cast<std::size_t>(nrows) * ncols);
    std::copy(u.basis.begin(), u.basis.end(), scratch.begin());
    std::copy(w.basis.begin(), w.basis.end(), scratch.begin() + u.basis.size());
    return rank_in_place(scratch.data(), nrows, ncols, F);
}

}  // namespace

namespace {

void check_membership(const GeometryContext& geo, const Subspace& u) {
    if (u.width != geo.n_plus_1) throw std::invalid_argument("subspace does not belong to this geometry");
    for (std::uint32_t e : u.basis)
        if (e >= static_cast<std::uint32_t>(geo.field->q()))
            throw std::invalid_argument("subspace entries exceed the field order of this geometry");
}

}  // namespace

int intersection_dim(const GeometryContext& geo, const Subspace& u, const Subspace& w) {
    check_membership(geo, u);
    check_membership(geo, w);
    std::vector<std::uint32_t> scratch;
    return u.dim + w.dim - stacked_rank(u, w, *geo.field, scratch);
}

long count_points_avoiding(const GeometryContext& geo, const Subspace& x, const Subspace& y) {
    check_membership(geo, x);
    check_membership(geo, y);
    const auto points = enumerate_subspaces(geo, 1);
    std::vector<std::uint32_t> scratch;
    long count = 0;
    for (const Subspace& z : points)
        if (stacked_rank(z, x, *geo.field, scratch) == 1 + x.dim &&
            stacked_rank(z, y, *geo.field, scratch) == 1 + y.dim)
            ++count;
    return count;
}

const char* relation_name(Relation r) { return r == Relation::Skew ? "skew" : "meet"; }

Relation relation_from_name(const std::string& name) {
    if (name == "skew") return Relation::Skew;
    if (name == "meet") return Relation::Meet;
    throw std::invalid_argument("unknown relation '" + name + "' (expected skew or meet)");
}

IncidenceMatrix::IncidenceMatrix(long p, int t, int n_plus_1, int r, int s, Relation rel, std::vector<Subspace> rows,
                                 std::vector<Subspace> cols)
    : p_(p),
      t_(t),
      n_plus_1_(n_plus_1),
      r_(r),
      s_(s),
      rel_(rel),
      row_spaces_(std::move(rows)),
      col_spaces_(std::move(cols)),
      words_per_row_((col_spaces_.size() + 63) / 64),
      bits_(row_spaces_.size() * words_per_row_, 0) {}

void IncidenceMatrix::set_entry(std::size_t i, std::size_t j, int v) {
    std::uint64_t& w = bits_[i * words_per_row_ + j / 64];
    const std::uint64_t mask = std::uint64_t{1} << (j % 64);
    if (v)
        w |= mask;
    else
        w &= ~mask;
}

long IncidenceMatrix::row_sum(std::size_t i) const {
    long s = 0;
    for (std::size_t w = 0; w < words_per_row_; ++w) s += __builtin_popcountll(bits_[i * words_per_row_ + w]);
    return s;
}

bool operator==(const IncidenceMatrix& a, const IncidenceMatrix& b) {
    return a.p_ == b.p_ && a.t_ == b.t_ && a.n_plus_1_ == b.n_plus_1_ && a.r_ == b.r_ && a.s_ == b.s_ &&
           a.rel_ == b.rel_ && a.row_spaces_ == b.row_spaces_ && a.col_spaces_ == b.col_spaces_ && a.bits_ == b.bits_;
}

IncidenceMatrix build_incidence(const GeometryContext& geo, int r, int s, Relation rel, int threads) {
    const int n = geo.n_plus_1 - 1;
    if (r < 1 || r > n)
        throw std::invalid_argument("r = " + std::to_string(r) + " violates 1 <= r <= n = " + std::to_string(n));
    if (s < 1 || s > n)
        throw std::invalid_argument("s = " + std::to_string(s) + " violates 1 <= s <= n = " + std::to_string(n));

    std::vector<Subspace> rows = enumerate_subspaces(geo, r);
    std::vector<Subspace> cols = (s == r) ? rows : enumerate_subspaces(geo, s);
    IncidenceMatrix m(geo.field->p(), geo.field->t(), geo.n_plus_1, r, s, rel, std::move(rows), std::move(cols));

    const std::size_t nrows = m.rows(), ncols = m.cols();
    const FieldContext& F = *geo.field;
    const auto& rs = m.row_spaces();
    const auto& cs = m.col_spaces();

    auto fill_range = [&](std::size_t lo, std::size_t hi) {
        std::vector<std::uint32_t> scratch;
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = 0; j < ncols; ++j) {
                const int idim = r + s - stacked_rank(rs[i], cs[j], F, scratch);
                const bool skew = idim == 0;
                m.set_entry(i, j, (rel == Relation::Skew) == skew ? 1 : 0);
            }
        }
    };

    std::size_t nthreads = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
    if (nthreads == 0) nthreads = 1;
    if (nrows * ncols < 65536 || threads == 1) nthreads = 1;
    nthreads = std::min(nthreads, nrows);

    if (nthreads <= 1) {
        fill_range(0, nrows);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (nrows + nthreads - 1) / nthreads;
        for (std::size_t k = 0; k < nthreads; ++k) {
            const std::size_t lo = k * chunk, hi = std::min(nrows, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(fill_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return m;
}

void IncidenceMatrix::write(std::ostream& os) const {
    os << p_ << ' ' << t_ << ' ' << n_plus_1_ << ' ' << r_ << ' ' << s_ << ' ' << relation_name(rel_) << '\n';
    os << rows() << ' ' << cols() << '\n';
    std::string line(cols(), '0');
    for (std::size_t i = 0; i < rows(); ++i) {
        for (std::size_t j = 0; j < cols(); ++j) line[j] = entry(i, j) ? '1' : '0';
        os << line << '\n';
    }
}

IncidenceMatrix IncidenceMatrix::read(std::istream& is) {
    long p;
    int t, n1, r, s;
    std::string relname;
    if (!(is >> p >> t >> n1 >> r >> s >> relname)) throw std::runtime_error("bad matrix file header");
    const Relation rel = relation_from_name(relname);
    std::size_t nrows, ncols;
    if (!(is >> nrows >> ncols)) throw std::runtime_error("bad matrix file dimensions");

    GeometryContext geo = make_geometry(p, t, n1);
    std::vector<Subspace> rows = enumerate_subspaces(geo, r);
    std::vector<Subspace> cols = (s == r) ? rows : enumerate_subspaces(geo, s);
    if (rows.size() != nrows || cols.size() != ncols)
        throw std::runtime_error("matrix file dimensions do not match the declared parameters");

    IncidenceMatrix m(p, t, n1, r, s, rel, std::move(rows), std::move(cols));
    std::string line;
    std::getline(is, line);  // finish the dimensions line
    for (std::size_t i = 0; i < nrows; ++i) {
        if (!std::getline(is, line) || line.size() != ncols) throw std::runtime_error("truncated matrix file row");
        for (std::size_t j = 0; j < ncols; ++j) {
            if (line[j] != '0' && line[j] != '1') throw std::runtime_error("matrix file entries must be 0 or 1");
            if (line[j] == '1') m.set_entry(i, j, 1);
        }
    }
    return m;
}

void write_matrix_file(const IncidenceMatrix& m, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    m.write(os);
    if (!os.flush()) throw std::runtime_error("write failed for " + path);
}

IncidenceMatrix read_matrix_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return IncidenceMatrix::read(is);
}

IntegerMatrix to_integer_matrix(const IncidenceMatrix& m) {
    IntegerMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.entry(i, j)) out.at(i, j) = 1;
    return out;
}

long p_rank(const IncidenceMatrix& m, long p) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    std::vector<std::uint64_t> a(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i * m.cols() + j] = static_cast<std::uint64_t>(m.entry(i, j));
    return detail::residue_rank(a, m.rows(), m.cols(), p);
}

}  // namespace pgsnf
