// Acceptance suite: runs every cross-verification criterion end to end and
// prints one pass/fail line per criterion.  Exit code 0 iff all pass.
//
//   acceptance             all standard criteria (q <= 4)
//   acceptance --slow-only just the q = 5 extension of criterion 2
//
// The q = 5 run (806 x 806) takes a few minutes and is registered in ctest
// as a separate test that skips itself unless PGSNF_SLOW=1 is set.

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pgsnf/formulas.hpp"
#include "pgsnf/smith.hpp"
#include "pgsnf/subspaces.hpp"

using namespace pgsnf;

namespace {

int failures = 0;

void criterion(const std::string& name, const std::function<bool(std::string&)>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << "  (" << dt << "s)" << std::endl;
    if (!ok) ++failures;
}

struct Generated {
    long q;
    long p;
    int t;
    IntegerMatrix skew;
    IntegerMatrix meet;
    IntegerMatrix product;  // lines-vs-points times points-vs-lines
    DivisorProfile local;   // p-local profile of the skew matrix
};

Generated generate(long p, int t) {
    Generated g;
    g.p = p;
    g.t = t;
    g.q = 1;
    for (int i = 0; i < t; ++i) g.q *= p;
    auto geo = make_geometry(p, t, 4);
    g.skew = to_integer_matrix(build_incidence(geo, 2, 2, Relation::Skew));
    g.meet = to_integer_matrix(build_incidence(geo, 2, 2, Relation::Meet));
    const IntegerMatrix b = to_integer_matrix(build_incidence(geo, 1, 2, Relation::Skew));
    const IntegerMatrix bt = to_integer_matrix(build_incidence(geo, 2, 1, Relation::Skew));
    g.product = mat_mul(bt, b);
    return g;
}

DivisorProfile make_profile(long p, std::map<int, long> entries) {
    DivisorProfile pr;
    pr.p = p;
    for (const auto& [i, e] : entries) pr.add(i, e);
    return pr;
}

int run_slow_only() {
    criterion("criterion 2 (slow extension): local route equals closed form, q=5 (806x806)", [](std::string& detail) {
        auto geo = make_geometry(5, 1, 4);
        const IntegerMatrix a = to_integer_matrix(build_incidence(geo, 2, 2, Relation::Skew));
        const DivisorProfile local = p_elementary_divisors(a, 5);
        detail = local.to_json();
        return local == skew_lines_divisor_profile(1, 5);
    });
    return failures == 0 ? 0 : 1;
}

int run_stretch_q9() {
    criterion("stretch: p-rank of the 7462x7462 skew-lines matrix of PG(3,9) equals the closed form",
              [](std::string& detail) {
                  auto geo = make_geometry(3, 2, 4);
                  const IncidenceMatrix m = build_incidence(geo, 2, 2, Relation::Skew);
                  for (std::size_t i = 0; i < m.rows(); ++i)
                      if (m.row_sum(i) != 6561) {
                          detail = "bad row sum";
                          return false;
                      }
                  const long rank = p_rank(m, 3);
                  const auto low = skew_incidence_low_divisors(3, 2, 3, 2, 2);
                  detail = "rank " + std::to_string(rank) + ", formula " + low.at(0).get_str();
                  return mpz_class(rank) == low.at(0);
              });
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1 && std::strcmp(argv[1], "--slow-only") == 0) return run_slow_only();
    if (argc > 1 && std::strcmp(argv[1], "--stretch-q9") == 0) return run_stretch_q9();

    // ---- criterion 1: closed-form profile reproduces the PG(3,9) table ----
    criterion("criterion 1: closed-form profile for q=9 matches the reference table, under 1s",
              [](std::string& detail) {
                  const auto t0 = std::chrono::steady_clock::now();
                  const DivisorProfile prof = skew_lines_divisor_profile(2, 3);
                  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                  const DivisorProfile expect = make_profile(
                      3, {{0, 361}, {1, 256}, {2, 6025}, {4, 202}, {5, 256}, {6, 361}, {8, 1}});
                  detail = prof.to_json();
                  if (dt >= 1.0) {
                      detail += " (too slow)";
                      return false;
                  }
                  return prof == expect;
              });

    std::vector<Generated> gens;
    gens.push_back(generate(2, 1));
    gens.push_back(generate(3, 1));
    gens.push_back(generate(2, 2));

    // ---- criterion 2: local elimination vs closed form, SNF oracle ----
    for (Generated& g : gens) {
        criterion("criterion 2: local route equals closed form, q=" + std::to_string(g.q), [&](std::string& detail) {
            g.local = p_elementary_divisors(g.skew, g.p);
            detail = g.local.to_json();
            return g.local == skew_lines_divisor_profile(g.t, g.p);
        });
    }
    for (const Generated& g : gens) {
        if (g.q > 3) continue;
        criterion("criterion 2: full-chain oracle agrees with local route, q=" + std::to_string(g.q),
                  [&](std::string&) { return profile_from_chain(smith_normal_form(g.skew), g.p) == g.local; });
    }

    // ---- criterion 3: product profile against the SNF oracle ----
    for (const Generated& g : gens) {
        if (g.q > 3) continue;
        criterion("criterion 3: product SNF equals closed form incl. top divisor, q=" + std::to_string(g.q),
                  [&](std::string& detail) {
                      const DivisorProfile chain = profile_from_chain(smith_normal_form(g.product), g.p);
                      const DivisorProfile formula = product_divisor_profile(3, g.t, g.p, 2, 2);
                      detail = chain.to_json();
                      return chain == formula && chain.get(g.t * 4) == 1;
                  });
    }

    // ---- criterion 4: p-ranks of the skew matrices themselves ----
    struct RankCase {
        int n_plus_1, r, s;
        long p;
        int t;
    };
    for (const RankCase c : {RankCase{4, 2, 2, 2, 1}, {4, 2, 2, 3, 1}, {4, 2, 2, 2, 2}, {5, 2, 2, 2, 1},
                             {4, 2, 3, 2, 1}}) {
        long q = 1;
        for (int i = 0; i < c.t; ++i) q *= c.p;
        criterion("criterion 4: p-rank equals closed form, (n+1,r,s,q)=(" + std::to_string(c.n_plus_1) + "," +
                      std::to_string(c.r) + "," + std::to_string(c.s) + "," + std::to_string(q) + "), under 60s",
                  [&](std::string& detail) {
                      const auto t0 = std::chrono::steady_clock::now();
                      auto geo = make_geometry(c.p, c.t, c.n_plus_1);
                      const IntegerMatrix a = to_integer_matrix(build_incidence(geo, c.r, c.s, Relation::Skew));
                      const long rank = p_rank(a, c.p);
                      const auto low = skew_incidence_low_divisors(c.n_plus_1 - 1, c.t, c.p, c.r, c.s);
                      const mpz_class expect = low.count(0) ? low.at(0) : mpz_class(0);
                      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                      detail = "rank " + std::to_string(rank) + ", formula " + expect.get_str();
                      return mpz_class(rank) == expect && dt < 60.0;
                  });
    }

    // ---- criterion 5: exact matrix identities ----
    for (const Generated& g : gens) {
        criterion("criterion 5: identities (adjacency, product, complement, congruence), q=" + std::to_string(g.q),
                  [&](std::string& detail) {
                      if (!skew_square_residual(g.skew, g.q).is_zero()) {
                          detail = "adjacency equation residual nonzero";
                          return false;
                      }
                      if (!point_product_residual(g.product, g.skew, g.q).is_zero()) {
                          detail = "product equation residual nonzero";
                          return false;
                      }
                      const IntegerMatrix sum = identity_residual({{1, &g.skew}, {1, &g.meet}});
                      if (!(sum == IntegerMatrix::ones(g.skew.rows(), g.skew.cols()))) {
                          detail = "skew + meet != all-ones";
                          return false;
                      }
                      if (!congruent_mod(g.product, -g.skew, g.p, g.t)) {
                          detail = "product not congruent to negated skew matrix mod p^t";
                          return false;
                      }
                      return true;
                  });
    }

    // ---- criterion 6: property suites ----
    criterion("criterion 6a: coefficient tables (dual route, palindrome, total), p in {2,3,5,7}, n+1 <= 6",
              [](std::string&) {
                  for (long p : {2L, 3L, 5L, 7L})
                      for (int n1 = 2; n1 <= 6; ++n1) {
                          const CoefficientTable tab = dk_table(p, n1);
                          mpz_class total = 0, pn;
                          for (int k = 0; k <= tab.degree(); ++k) {
                              total += tab.dk(k);
                              if (tab.dk(k) != tab.dk(tab.degree() - k)) return false;
                          }
                          mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p),
                                        static_cast<unsigned long>(n1));
                          if (total != pn) return false;
                      }
                  return true;
              });

    criterion("criterion 6b: upper-block totals equal q^3+q^2+q for q <= 81", [](std::string&) {
        for (auto [p, tmax] : {std::pair<long, int>{2, 6}, {3, 4}, {5, 2}, {7, 2}}) {
            for (int t = 1; t <= tmax; ++t) {
                mpz_class q = 1, total = 0;
                for (int i = 0; i < t; ++i) q *= p;
                for (const auto& [i, e] : skew_lines_upper_divisors(t, p)) total += e;
                if (total != q * q * q + q * q + q) return false;
            }
        }
        return true;
    });

    criterion("criterion 6c: low-block symmetry on formula and computed profiles", [&](std::string&) {
        for (auto [p, tmax] : {std::pair<long, int>{2, 6}, {3, 4}, {5, 2}, {7, 2}}) {
            for (int t = 1; t <= tmax; ++t) {
                const DivisorProfile prof = skew_lines_divisor_profile(t, p);
                for (int i = 0; i < t; ++i)
                    if (prof.get(i) != prof.get(3 * t - i)) return false;
            }
        }
        for (const Generated& g : gens) {
            for (int i = 0; i < g.t; ++i)
                if (g.local.get(i) != g.local.get(3 * g.t - i)) return false;
        }
        return true;
    });

    criterion("criterion 6d: Hamada dimension sums count projective points", [](std::string&) {
        for (auto [p, tmax] : {std::pair<long, int>{2, 6}, {3, 4}, {5, 2}, {7, 2}}) {
            for (int t = 1; t <= tmax; ++t)
                for (int n = 2; n <= 4; ++n) {
                    mpz_class total = 0, q = 1, qn1 = 1;
                    for (int i = 0; i < t; ++i) q *= p;
                    for (int i = 0; i <= n; ++i) qn1 *= q;
                    for (const HamadaTuple& h : hamada_set(n, t, p)) total += h.d;
                    if (total != (qn1 - 1) / (q - 1) - 1) return false;
                }
        }
        return true;
    });

    criterion("criterion 6e: congruent perturbations preserve low divisors (200 matrices per prime)",
              [](std::string&) {
                  std::mt19937 rng(20240820);
                  std::uniform_int_distribution<int> side(1, 8), entry(-9, 9), scale(-3, 3), kdist(1, 3);
                  for (long p : {2L, 3L, 5L}) {
                      for (int it = 0; it < 200; ++it) {
                          const int rows = side(rng), cols = side(rng), k = kdist(rng);
                          IntegerMatrix m(rows, cols);
                          for (int i = 0; i < rows; ++i)
                              for (int j = 0; j < cols; ++j) m.at(i, j) = entry(rng);
                          mpz_class pk = 1;
                          for (int i = 0; i < k; ++i) pk *= p;
                          IntegerMatrix pert = m;
                          for (int i = 0; i < rows; ++i)
                              for (int j = 0; j < cols; ++j) pert.at(i, j) += pk * scale(rng);
                          const DivisorProfile a = p_elementary_divisors(m, p);
                          const DivisorProfile b = p_elementary_divisors(pert, p);
                          for (int i = 0; i < k; ++i)
                              if (a.get(i) != b.get(i)) return false;
                      }
                  }
                  return true;
              });

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures)) << std::endl;
    return failures == 0 ? 0 : 1;
}
