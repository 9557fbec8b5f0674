#include "pgsnf/formulas.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

#include "pgsnf/field.hpp"

namespace pgsnf {

CoefficientTable dk_table(long p, int n_plus_1) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (n_plus_1 < 1) throw std::invalid_argument("n+1 must be >= 1");

    const int deg = static_cast<int>(p - 1) * n_plus_1;

    // Route 1: repeated convolution with 1 + x + ... + x^{p-1}.
    std::vector<mpz_class> conv{1};
    for (int rep = 0; rep < n_plus_1; ++rep) {
        std::vector<mpz_class> next(conv.size() + static_cast<std::size_t>(p) - 1);
        for (std::size_t i = 0; i < conv.size(); ++i) {
            if (conv[i] == 0) continue;
            for (long j = 0; j < p; ++j) next[i + static_cast<std::size_t>(j)] += conv[i];
        }
        conv = std::move(next);
    }

    // Route 2: d_k = sum_j (-1)^j C(n+1, j) C(n + k - j*p, n).
    std::vector<mpz_class> alt(static_cast<std::size_t>(deg) + 1);
    mpz_class b1, b2;
    for (int k = 0; k <= deg; ++k) {
        mpz_class sum = 0;
        for (long j = 0; j <= k / p; ++j) {
            mpz_bin_uiui(b1.get_mpz_t(), static_cast<unsigned long>(n_plus_1), static_cast<unsigned long>(j));
            mpz_bin_uiui(b2.get_mpz_t(), static_cast<unsigned long>(n_plus_1 - 1 + k - j * p),
                         static_cast<unsigned long>(n_plus_1 - 1));
            if (j % 2 == 0)
                sum += b1 * b2;
            else
                sum -= b1 * b2;
        }
        alt[static_cast<std::size_t>(k)] = sum;
    }

    if (conv != alt) throw std::logic_error("coefficient table routes disagree");

    CoefficientTable tab;
    tab.p = p;
    tab.n_plus_1 = n_plus_1;
    tab.d = std::move(conv);
    return tab;
}

mpz_class q_binomial(long m, long l, long q) {
    if (m < 0 || l < 0 || l > m) throw std::invalid_argument("q_binomial requires 0 <= l <= m");
    if (q < 2) throw std::invalid_argument("q_binomial requires q >= 2");
    const mpz_class qz = q;
    mpz_class result = 1, num, den, qp;
    for (long i = 1; i <= l; ++i) {
        mpz_pow_ui(qp.get_mpz_t(), qz.get_mpz_t(), static_cast<unsigned long>(m - l + i));
        num = qp - 1;
        mpz_pow_ui(qp.get_mpz_t(), qz.get_mpz_t(), static_cast<unsigned long>(i));
        den = qp - 1;
        result *= num;
        mpz_divexact(result.get_mpz_t(), result.get_mpz_t(), den.get_mpz_t());
    }
    return result;
}

namespace {

// Odometer over [lo..hi]^t in lexicographic order (first coordinate most
// significant).  Returns false when exhausted.
bool next_tuple(std::vector<int>& s, int lo, int hi) {
    int k = static_cast<int>(s.size()) - 1;
    while (k >= 0 && s[k] == hi) s[k--] = lo;
    if (k < 0) return false;
    ++s[k];
    return true;
}

HamadaTuple build_hamada(const std::vector<int>& s, long p, const CoefficientTable& tab) {
    const int t = static_cast<int>(s.size());
    HamadaTuple h;
    h.s = s;
    h.lambda.resize(t);
    h.d = 1;
    for (int i = 0; i < t; ++i) {
        h.lambda[i] = p * s[(i + 1) % t] - s[i];
        h.d *= tab.dk(h.lambda[i]);
    }
    return h;
}

bool in_hamada_set(const HamadaTuple& h, int bound) {
    for (long lam : h.lambda)
        if (lam < 0 || lam > bound) return false;
    return true;
}

long deficiency(const std::vector<int>& s, int level) {
    long a = 0;
    for (int si : s)
        if (si < level) a += level - si;
    return a;
}

long excess(const std::vector<int>& s, int level) {
    long b = 0;
    for (int si : s)
        if (si > level) b += si - level;
    return b;
}

void check_tuple_params(int n, int t, long p) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (t < 1) throw std::invalid_argument("t must be >= 1");
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    double bits = t * std::log2(static_cast<double>(n) + 1);
    if (bits > 27) throw std::invalid_argument("tuple enumeration too large");
}

}  // namespace

std::vector<HamadaTuple> hamada_set(int n, int t, long p) {
    check_tuple_params(n, t, p);
    const CoefficientTable tab = dk_table(p, n + 1);
    const int bound = tab.degree();
    std::vector<HamadaTuple> out;
    std::vector<int> s(static_cast<std::size_t>(t), 1);
    do {
        HamadaTuple h = build_hamada(s, p, tab);
        if (in_hamada_set(h, bound)) out.push_back(std::move(h));
    } while (next_tuple(s, 1, n));
    return out;
}

std::vector<std::vector<int>> tuples_with_twos(int t, int i) {
    if (t < 1 || i < 0 || i > t) throw std::invalid_argument("tuples_with_twos requires 0 <= i <= t");
    std::vector<std::vector<int>> out;
    std::vector<int> s(static_cast<std::size_t>(t), 1);
    do {
        int twos = 0;
        for (int si : s) twos += si == 2;
        if (twos == i) out.push_back(s);
    } while (next_tuple(s, 1, 3));
    return out;
}

std::vector<HamadaTuple> deficiency_family(int alpha, int s, int n, int t, long p) {
    std::vector<HamadaTuple> out;
    for (HamadaTuple& h : hamada_set(n, t, p))
        if (deficiency(h.s, s) == alpha) out.push_back(std::move(h));
    return out;
}

std::vector<HamadaTuple> excess_family(int beta, int r, int n, int t, long p) {
    std::vector<HamadaTuple> out;
    for (HamadaTuple& h : hamada_set(n, t, p))
        if (excess(h.s, n + 1 - r) == beta) out.push_back(std::move(h));
    return out;
}

std::vector<HamadaTuple> exponent_family(int i, int r, int s, int n, int t, long p) {
    std::vector<HamadaTuple> out;
    for (HamadaTuple& h : hamada_set(n, t, p)) {
        const long a = deficiency(h.s, s);
        const long b = excess(h.s, n + 1 - r);
        if (a + b == i && a <= static_cast<long>(t) * (s - 1) && b <= static_cast<long>(t) * (r - 1))
            out.push_back(std::move(h));
    }
    return out;
}

std::string tuples_to_json(const std::vector<std::vector<int>>& family) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : family) j.push_back(s);
    return j.dump();
}

std::string tuples_to_json(const std::vector<HamadaTuple>& family) {
    std::vector<std::vector<int>> plain;
    plain.reserve(family.size());
    for (const HamadaTuple& h : family) plain.push_back(h.s);
    return tuples_to_json(plain);
}

DivisorProfile product_divisor_profile(int n, int t, long p, int r, int s) {
    if (r < 1 || r > n || s < 1 || s > n) throw std::invalid_argument("product profile requires 1 <= r, s <= n");
    DivisorProfile out;
    out.p = p;
    for (const HamadaTuple& h : hamada_set(n, t, p)) {
        const long a = deficiency(h.s, s);
        const long b = excess(h.s, n + 1 - r);
        out.add(static_cast<int>(a + b), h.d);
    }
    out.add(t * (r + s), 1);
    return out;
}

std::map<int, mpz_class> skew_lines_upper_divisors(int t, long p) {
    check_tuple_params(3, t, p);
    const CoefficientTable tab = dk_table(p, 4);
    std::map<int, mpz_class> out;
    std::vector<int> s(static_cast<std::size_t>(t), 1);
    do {
        int twos = 0;
        for (int si : s) twos += si == 2;
        const HamadaTuple h = build_hamada(s, p, tab);
        if (h.d != 0) out[2 * t + twos] += h.d;
    } while (next_tuple(s, 1, 3));
    return out;
}

DivisorProfile skew_lines_divisor_profile(int t, long p) {
    const std::map<int, mpz_class> upper = skew_lines_upper_divisors(t, p);
    mpz_class q;
    mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(t));
    const mpz_class q2 = q * q, q4 = q2 * q2;

    DivisorProfile out;
    out.p = p;

    mpz_class low_sum = 0;
    for (int i = 0; i < t; ++i) {
        const auto it = upper.find(3 * t - i);
        const mpz_class e = it == upper.end() ? mpz_class(0) : it->second;
        out.add(i, e);
        low_sum += e;
    }
    out.add(t, q4 + q2 - low_sum);
    for (const auto& [i, e] : upper) out.add(i, e);
    out.add(4 * t, 1);
    return out;
}

std::map<int, mpz_class> skew_incidence_low_divisors(int n, int t, long p, int r, int s) {
    if (r < 1 || r > n || s < 1 || s > n) throw std::invalid_argument("low divisors require 1 <= r, s <= n");
    std::map<int, mpz_class> out;
    for (const HamadaTuple& h : hamada_set(n, t, p)) {
        const long a = deficiency(h.s, s);
        const long b = excess(h.s, n + 1 - r);
        if (a + b < t) out[static_cast<int>(a + b)] += h.d;
    }
    return out;
}

SrgSpectrum srg_spectrum(long q) {
    if (q < 2) throw std::invalid_argument("q must be a prime power >= 2");
    long p = 0;
    for (long d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    if (p == 0) p = q;
    long rest = q;
    int t = 0;
    while (rest % p == 0) {
        rest /= p;
        ++t;
    }
    if (rest != 1) throw std::invalid_argument(std::to_string(q) + " is not a prime power");

    SrgSpectrum sp;
    sp.q = q;
    sp.p = p;
    sp.t = t;
    const mpz_class qz = q;
    const mpz_class q2 = qz * qz, q3 = q2 * qz, q4 = q3 * qz;
    sp.v = q4 + q3 + 2 * q2 + qz + 1;
    sp.k = q4;
    sp.lam = q4 - q3 - q2 + qz;
    sp.mu = q4 - q3;
    sp.eigenvalues = {qz, -q2, q4};
    sp.multiplicities = {q4 + q2, q3 + q2 + qz, 1};
    return sp;
}

IntegerMatrix skew_square_residual(const IntegerMatrix& a, long q) {
    const mpz_class qz = q;
    const mpz_class q2 = qz * qz, q3 = q2 * qz, q4 = q3 * qz;
    const IntegerMatrix a2 = mat_mul(a, a);
    const IntegerMatrix id = IntegerMatrix::identity(a.rows());
    const IntegerMatrix j = IntegerMatrix::ones(a.rows(), a.cols());
    const IntegerMatrix jmai = identity_residual({{1, &j}, {-1, &a}, {-1, &id}});
    return identity_residual({{1, &a2}, {-q4, &id}, {-(q4 - q3 - q2 + qz), &a}, {-(q4 - q3), &jmai}});
}

IntegerMatrix point_product_residual(const IntegerMatrix& pr, const IntegerMatrix& a, long q) {
    const mpz_class qz = q;
    const mpz_class q2 = qz * qz, q3 = q2 * qz;
    const IntegerMatrix id = IntegerMatrix::identity(a.rows());
    const IntegerMatrix j = IntegerMatrix::ones(a.rows(), a.cols());
    const IntegerMatrix jmai = identity_residual({{1, &j}, {-1, &a}, {-1, &id}});
    return identity_residual({{1, &pr}, {-(q3 + q2), &id}, {-(q3 + q2 - qz - 1), &a}, {-(q3 + q2 - qz), &jmai}});
}

}  // namespace pgsnf
