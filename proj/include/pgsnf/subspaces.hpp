#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "pgsnf/field.hpp"

namespace pgsnf {

class IntegerMatrix;

/// Ambient vector space F_q^{n+1}.
struct GeometryContext {
    std::shared_ptr<const FieldContext> field;
    int n_plus_1 = 0;
};

GeometryContext make_geometry(long p, int t, int n_plus_1);

/// An r-dimensional subspace of F_q^{n+1}, stored as the unique reduced
/// row echelon basis matrix (r rows, n+1 columns, entries as field element
/// indices).  Two subspaces are equal iff their basis matrices are equal.
struct Subspace {
    int dim = 0;
    int width = 0;
    std::vector<std::uint32_t> basis;  // row-major, dim * width
    std::vector<int> pivots;           // strictly increasing pivot columns

    std::uint32_t entry(int i, int j) const { return basis[static_cast<std::size_t>(i) * width + j]; }
    friend bool operator==(const Subspace&, const Subspace&) = default;
};

/// All r-subspaces in canonical order: pivot-column sets lexicographically,
/// then the free entries read row-major as base-q digits, ascending.
std::vector<Subspace> enumerate_subspaces(const GeometryContext& geo, int r);

/// dim(U ∩ W) = dim U + dim W - rank of the stacked basis matrix.
int intersection_dim(const GeometryContext& geo, const Subspace& u, const Subspace& w);

/// Number of 1-subspaces meeting both x and y trivially.
long count_points_avoiding(const GeometryContext& geo, const Subspace& x, const Subspace& y);

enum class Relation { Skew, Meet };

const char* relation_name(Relation r);
Relation relation_from_name(const std::string& name);

/// Dense 0/1 incidence matrix between the r-subspaces (rows) and the
/// s-subspaces (columns); entry 1 means trivial intersection (Skew) or
/// nontrivial intersection (Meet).  Rows are bit-packed.
class IncidenceMatrix {
  public:
    IncidenceMatrix(long p, int t, int n_plus_1, int r, int s, Relation rel, std::vector<Subspace> rows,
                    std::vector<Subspace> cols);

    long p() const { return p_; }
    int t() const { return t_; }
    int n_plus_1() const { return n_plus_1_; }
    int r() const { return r_; }
    int s() const { return s_; }
    Relation relation() const { return rel_; }

    std::size_t rows() const { return row_spaces_.size(); }
    std::size_t cols() const { return col_spaces_.size(); }
    const std::vector<Subspace>& row_spaces() const { return row_spaces_; }
    const std::vector<Subspace>& col_spaces() const { return col_spaces_; }

    int entry(std::size_t i, std::size_t j) const {
        return static_cast<int>((bits_[i * words_per_row_ + j / 64] >> (j % 64)) & 1u);
    }
    void set_entry(std::size_t i, std::size_t j, int v);
    long row_sum(std::size_t i) const;

    void write(std::ostream& os) const;
    static IncidenceMatrix read(std::istream& is);

    friend bool operator==(const IncidenceMatrix& a, const IncidenceMatrix& b);

  private:
    long p_;
    int t_;
    int n_plus_1_;
    int r_, s_;
    Relation rel_;
    std::vector<Subspace> row_spaces_;
    std::vector<Subspace> col_spaces_;
    std::size_t words_per_row_;
    std::vector<std::uint64_t> bits_;
};

/// Builds the incidence matrix; the fill is parallelized over row ranges
/// when the matrix is large (threads = 0 picks a sensible count, 1 forces
/// serial).  Requires 1 <= r, s <= n.
IncidenceMatrix build_incidence(const GeometryContext& geo, int r, int s, Relation rel, int threads = 0);

void write_matrix_file(const IncidenceMatrix& m, const std::string& path);
IncidenceMatrix read_matrix_file(const std::string& path);

/// Copy of the 0/1 entries as an exact integer matrix.
IntegerMatrix to_integer_matrix(const IncidenceMatrix& m);

/// Rank of the incidence matrix over Z/p, straight from the bit rows (no
/// big-integer copy; the matrix for q = 9 is 7462 square).
long p_rank(const IncidenceMatrix& m, long p);

}  // namespace pgsnf
