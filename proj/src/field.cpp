#include "pgsnf/field.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>

namespace pgsnf {

bool is_prime(long n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (long d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

namespace {

// Dense polynomials over Z/p, coefficient i of x^i, no trailing-zero
// normalization required by callers.
using Poly = std::vector<int>;

int poly_degree(const Poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (f[i] != 0) return i;
    return -1;
}

// Remainder of f by monic divisor g, in place.
void poly_mod(Poly& f, const Poly& g, long p) {
    const int dg = poly_degree(g);
    assert(dg >= 0 && g[dg] == 1);
    for (int i = poly_degree(f); i >= dg; --i) {
        const long c = f[i];
        if (c == 0) continue;
        for (int j = 0; j <= dg; ++j) {
            long v = f[i - dg + j] - c * g[j];
            v %= p;
            if (v < 0) v += p;
            f[i - dg + j] = static_cast<int>(v);
        }
    }
}

bool poly_is_zero(const Poly& f) { return poly_degree(f) < 0; }

// Trial division by every monic polynomial of degree 1..deg(f)/2.
bool poly_irreducible(const Poly& f, long p) {
    const int df = poly_degree(f);
    if (df < 1) return false;
    if (df == 1) return true;
    for (int d = 1; d <= df / 2; ++d) {
        Poly g(d + 1, 0);
        g[d] = 1;
        // odometer over the d lower coefficients
        for (;;) {
            Poly r = f;
            poly_mod(r, g, p);
            if (poly_is_zero(r)) return false;
            int k = 0;
            while (k < d && ++g[k] == p) g[k++] = 0;
            if (k == d) break;
        }
    }
    return true;
}

// Lexicographically smallest monic irreducible of degree t over Z/p,
// comparing coefficient vectors from degree 0 upward.
Poly smallest_irreducible(long p, int t) {
    Poly f(t + 1, 0);
    f[t] = 1;
    std::vector<int> digits(t, 0);
    for (;;) {
        for (int i = 0; i < t; ++i) f[i] = digits[i];
        if (poly_irreducible(f, p)) return f;
        // advance in low-degree-first lexicographic order: the highest
        // index is the least significant position
        int k = t - 1;
        while (k >= 0 && ++digits[k] == static_cast<int>(p)) digits[k--] = 0;
        if (k < 0) throw std::logic_error("no irreducible polynomial found");
    }
}

}  // namespace

FieldContext::FieldContext(long p, int t) : p_(p), t_(t) {
    if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime, got " + std::to_string(p));
    if (t < 1) throw std::invalid_argument("field extension degree must be >= 1, got " + std::to_string(t));
    long q = 1;
    for (int i = 0; i < t; ++i) {
        q *= p;
        if (q > kMaxFieldOrder)
            throw std::invalid_argument("field order " + std::to_string(p) + "^" + std::to_string(t) +
                                        " exceeds the supported bound 2^16");
    }
    q_ = q;
    modulus_ = smallest_irreducible(p, t);
    if (!poly_irreducible(modulus_, p)) throw std::logic_error("modulus failed irreducibility verification");

    neg_tab_.resize(q_);
    for (long a = 0; a < q_; ++a) {
        // digit-wise negation mod p
        std::uint32_t r = 0, pw = 1;
        long v = a;
        for (int i = 0; i < t_; ++i) {
            const long c = v % p_;
            v /= p_;
            r += static_cast<std::uint32_t>((c == 0 ? 0 : p_ - c) * pw);
            pw *= static_cast<std::uint32_t>(p_);
        }
        neg_tab_[a] = r;
    }

    if (q_ <= kMulTableLimit) {
        mul_tab_.assign(static_cast<std::size_t>(q_) * q_, 0);
        for (long a = 0; a < q_; ++a)
            for (long b = a; b < q_; ++b) {
                const std::uint32_t m = mul_idx_poly(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
                mul_tab_[static_cast<std::size_t>(a) * q_ + b] = static_cast<std::uint16_t>(m);
                mul_tab_[static_cast<std::size_t>(b) * q_ + a] = static_cast<std::uint16_t>(m);
            }
        has_tables_ = true;
        inv_tab_.assign(q_, 0);
        for (long a = 1; a < q_; ++a) inv_tab_[a] = pow_idx(static_cast<std::uint32_t>(a), q_ - 2);
    }
}

FieldElement FieldContext::element(long index) const {
    if (index < 0 || index >= q_) throw std::invalid_argument("element index out of range");
    return {static_cast<std::uint32_t>(index), this};
}

FieldElement FieldContext::from_residue(long v) const {
    long r = v % p_;
    if (r < 0) r += p_;
    return {static_cast<std::uint32_t>(r), this};
}

std::vector<int> FieldContext::coeffs(FieldElement a) const {
    if (a.ctx != this) throw std::invalid_argument("field context mismatch");
    std::vector<int> c(t_);
    long v = a.idx;
    for (int i = 0; i < t_; ++i) {
        c[i] = static_cast<int>(v % p_);
        v /= p_;
    }
    return c;
}

std::uint32_t FieldContext::add_idx(std::uint32_t a, std::uint32_t b) const {
    if (p_ == 2) return a ^ b;
    if (t_ == 1) {
        const std::uint32_t s = a + b;
        return s >= static_cast<std::uint32_t>(p_) ? s - static_cast<std::uint32_t>(p_) : s;
    }
    std::uint32_t r = 0, pw = 1;
    for (int i = 0; i < t_; ++i) {
        std::uint32_t c = a % p_ + b % p_;
        if (c >= static_cast<std::uint32_t>(p_)) c -= static_cast<std::uint32_t>(p_);
        a /= static_cast<std::uint32_t>(p_);
        b /= static_cast<std::uint32_t>(p_);
        r += c * pw;
        pw *= static_cast<std::uint32_t>(p_);
    }
    return r;
}

std::uint32_t FieldContext::neg_idx(std::uint32_t a) const { return neg_tab_[a]; }

std::uint32_t FieldContext::sub_idx(std::uint32_t a, std::uint32_t b) const { return add_idx(a, neg_tab_[b]); }

std::uint32_t FieldContext::mul_idx_poly(std::uint32_t a, std::uint32_t b) const {
    if (t_ == 1) return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p_);
    int da[17], db[17];
    long va = a, vb = b;
    for (int i = 0; i < t_; ++i) {
        da[i] = static_cast<int>(va % p_);
        va /= p_;
        db[i] = static_cast<int>(vb % p_);
        vb /= p_;
    }
    long prod[33] = {0};
    for (int i = 0; i < t_; ++i) {
        if (da[i] == 0) continue;
        for (int j = 0; j < t_; ++j) prod[i + j] += static_cast<long>(da[i]) * db[j];
    }
    // reduce by the monic modulus: x^t = -(m_0 + ... + m_{t-1} x^{t-1})
    for (int k = 2 * t_ - 2; k >= t_; --k) {
        const long c = prod[k] % p_;
        if (c == 0) continue;
        for (int j = 0; j < t_; ++j) prod[k - t_ + j] -= c * modulus_[j];
    }
    std::uint32_t r = 0, pw = 1;
    for (int i = 0; i < t_; ++i) {
        long c = prod[i] % p_;
        if (c < 0) c += p_;
        r += static_cast<std::uint32_t>(c) * pw;
        pw *= static_cast<std::uint32_t>(p_);
    }
    return r;
}

std::uint32_t FieldContext::mul_idx(std::uint32_t a, std::uint32_t b) const {
    if (has_tables_) return mul_tab_[static_cast<std::size_t>(a) * q_ + b];
    return mul_idx_poly(a, b);
}

std::uint32_t FieldContext::pow_idx(std::uint32_t a, long e) const {
    if (e < 0) {
        a = inv_idx(a);
        e = -e;
    }
    std::uint32_t r = 1, base = a;
    while (e > 0) {
        if (e & 1) r = mul_idx(r, base);
        base = mul_idx(base, base);
        e >>= 1;
    }
    return r;
}

std::uint32_t FieldContext::inv_idx(std::uint32_t a) const {
    assert(a != 0);
    if (has_tables_) return inv_tab_[a];
    return pow_idx(a, q_ - 2);
}

namespace {
const FieldContext* common_ctx(FieldElement a, FieldElement b) {
    if (a.ctx == nullptr || a.ctx != b.ctx) throw std::invalid_argument("field context mismatch");
    return a.ctx;
}
}  // namespace

FieldElement FieldContext::add(FieldElement a, FieldElement b) const {
    if (a.ctx != this || b.ctx != this) throw std::invalid_argument("field context mismatch");
    return {add_idx(a.idx, b.idx), this};
}

FieldElement FieldContext::sub(FieldElement a, FieldElement b) const {
    if (a.ctx != this || b.ctx != this) throw std::invalid_argument("field context mismatch");
    return {sub_idx(a.idx, b.idx), this};
}

FieldElement FieldContext::mul(FieldElement a, FieldElement b) const {
    if (a.ctx != this || b.ctx != this) throw std::invalid_argument("field context mismatch");
    return {mul_idx(a.idx, b.idx), this};
}

FieldElement FieldContext::neg(FieldElement a) const {
    if (a.ctx != this) throw std::invalid_argument("field context mismatch");
    return {neg_idx(a.idx), this};
}

FieldElement FieldContext::inv(FieldElement a) const {
    if (a.ctx != this) throw std::invalid_argument("field context mismatch");
    if (a.idx == 0) throw std::domain_error("inverse of zero");
    return {inv_idx(a.idx), this};
}

FieldElement FieldContext::pow(FieldElement a, long e) const {
    if (a.ctx != this) throw std::invalid_argument("field context mismatch");
    if (a.idx == 0 && e < 0) throw std::domain_error("inverse of zero");
    if (a.idx == 0) return e == 0 ? one() : zero();
    return {pow_idx(a.idx, e), this};
}

std::vector<FieldElement> FieldContext::enumerate_elements() const {
    std::vector<FieldElement> out;
    out.reserve(q_);
    for (long i = 0; i < q_; ++i) out.push_back({static_cast<std::uint32_t>(i), this});
    return out;
}

std::shared_ptr<const FieldContext> make_field(long p, int t) { return std::make_shared<const FieldContext>(p, t); }

bool operator==(FieldElement a, FieldElement b) { return a.ctx == b.ctx && a.idx == b.idx; }

FieldElement add(FieldElement a, FieldElement b) { return common_ctx(a, b)->add(a, b); }
FieldElement sub(FieldElement a, FieldElement b) { return common_ctx(a, b)->sub(a, b); }
FieldElement mul(FieldElement a, FieldElement b) { return common_ctx(a, b)->mul(a, b); }

FieldElement neg(FieldElement a) {
    if (a.ctx == nullptr) throw std::invalid_argument("field context mismatch");
    return a.ctx->neg(a);
}

FieldElement inv(FieldElement a) {
    if (a.ctx == nullptr) throw std::invalid_argument("field context mismatch");
    return a.ctx->inv(a);
}

FieldElement pow(FieldElement a, long e) {
    if (a.ctx == nullptr) throw std::invalid_argument("field context mismatch");
    return a.ctx->pow(a, e);
}

}  // namespace pgsnf
