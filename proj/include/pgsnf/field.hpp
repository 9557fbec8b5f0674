#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace pgsnf {

class FieldContext;

/// Element of a finite field GF(p^t).  The index encodes the coefficient
/// vector (c_0, ..., c_{t-1}) of the polynomial-basis representation as the
/// base-p integer sum c_i * p^i, so index 0 is the zero element and index 1
/// is the multiplicative identity.
struct FieldElement {
    std::uint32_t idx = 0;
    const FieldContext* ctx = nullptr;
};

bool operator==(FieldElement a, FieldElement b);
inline bool operator!=(FieldElement a, FieldElement b) { return !(a == b); }

/// GF(p^t) with a fixed monic irreducible modulus polynomial.  Immutable
/// after construction; safe to share across threads.  All arithmetic is
/// exact.  Construction refuses q = p^t > 2^16.
class FieldContext {
  public:
    FieldContext(long p, int t);

    FieldContext(const FieldContext&) = delete;
    FieldContext& operator=(const FieldContext&) = delete;

    long p() const { return p_; }
    int t() const { return t_; }
    long q() const { return q_; }

    /// Modulus coefficients c_0..c_t (monic, c_t = 1), reduced mod p.
    /// Deterministic: the lexicographically smallest monic irreducible of
    /// degree t, comparing coefficients from degree 0 upward.
    const std::vector<int>& modulus() const { return modulus_; }

    FieldElement zero() const { return {0, this}; }
    FieldElement one() const { return {1, this}; }

    /// Element with the given enumeration index (0 <= index < q).
    FieldElement element(long index) const;

    /// Embedding of the prime subfield: residue v mod p as a field element.
    FieldElement from_residue(long v) const;

    /// Coefficient vector (c_0, ..., c_{t-1}) of an element.
    std::vector<int> coeffs(FieldElement a) const;

    FieldElement add(FieldElement a, FieldElement b) const;
    FieldElement sub(FieldElement a, FieldElement b) const;
    FieldElement mul(FieldElement a, FieldElement b) const;
    FieldElement neg(FieldElement a) const;
    FieldElement inv(FieldElement a) const;
    FieldElement pow(FieldElement a, long e) const;

    /// All q elements in index order (coefficient vectors read as base-p
    /// integers, ascending).
    std::vector<FieldElement> enumerate_elements() const;

    // Index-level kernel used by inner loops; no context checks.
    std::uint32_t add_idx(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t sub_idx(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t neg_idx(std::uint32_t a) const;
    std::uint32_t mul_idx(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t inv_idx(std::uint32_t a) const;
    std::uint32_t pow_idx(std::uint32_t a, long e) const;

  private:
    long p_;
    int t_;
    long q_;
    std::vector<int> modulus_;

    // Multiplication/inverse tables are a cache only; the polynomial-basis
    // arithmetic below is the canonical definition.
    bool has_tables_ = false;
    std::vector<std::uint16_t> mul_tab_;
    std::vector<std::uint32_t> inv_tab_;
    std::vector<std::uint32_t> neg_tab_;

    std::uint32_t mul_idx_poly(std::uint32_t a, std::uint32_t b) const;
};

/// Largest admissible field order.
inline constexpr long kMaxFieldOrder = 1L << 16;

/// Full q x q multiplication tables are precomputed up to this order.
inline constexpr long kMulTableLimit = 1L << 12;

/// Builds GF(p^t).  Throws std::invalid_argument for non-prime p, t < 1, or
/// p^t > kMaxFieldOrder.
std::shared_ptr<const FieldContext> make_field(long p, int t);

FieldElement add(FieldElement a, FieldElement b);
FieldElement sub(FieldElement a, FieldElement b);
FieldElement mul(FieldElement a, FieldElement b);
FieldElement neg(FieldElement a);
FieldElement inv(FieldElement a);
FieldElement pow(FieldElement a, long e);

inline FieldElement operator+(FieldElement a, FieldElement b) { return add(a, b); }
inline FieldElement operator-(FieldElement a, FieldElement b) { return sub(a, b); }
inline FieldElement operator-(FieldElement a) { return neg(a); }
inline FieldElement operator*(FieldElement a, FieldElement b) { return mul(a, b); }

bool is_prime(long n);

}  // namespace pgsnf
