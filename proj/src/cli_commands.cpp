#include "pgsnf/cli_commands.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "pgsnf/formulas.hpp"
#include "pgsnf/sha256.hpp"
#include "pgsnf/smith.hpp"

namespace pgsnf::cli {

namespace {

namespace fs = std::filesystem;

void validate(const JobSpec& spec) {
    if (!is_prime(spec.p)) throw UsageError("--p must be prime, got " + std::to_string(spec.p));
    if (spec.t < 1) throw UsageError("--t must be >= 1, got " + std::to_string(spec.t));
    double q_bits = spec.t * std::log2(static_cast<double>(spec.p));
    if (q_bits > 16.0) throw UsageError("p^t exceeds the supported field order bound 2^16");
    if (spec.n_plus_1 < 2) throw UsageError("--n (the ambient dimension n+1) must be >= 2");
    const int n = spec.n_plus_1 - 1;
    if (spec.r < 1 || spec.r > n)
        throw UsageError("--r " + std::to_string(spec.r) + " violates 1 <= r <= n = " + std::to_string(n));
    if (spec.s < 1 || spec.s > n)
        throw UsageError("--s " + std::to_string(spec.s) + " violates 1 <= s <= n = " + std::to_string(n));
}

long q_of(const JobSpec& spec) {
    long q = 1;
    for (int i = 0; i < spec.t; ++i) q *= spec.p;
    return q;
}

void check_size_guard(const JobSpec& spec, const mpz_class& rows, const mpz_class& cols) {
    if (spec.force) return;
    const mpz_class side = rows > cols ? rows : cols;
    if (side > spec.max_side)
        throw UsageError("matrix side " + side.get_str() + " exceeds the limit " + std::to_string(spec.max_side) +
                         "; raise --max-side or pass --force to run anyway");
}

void write_text_atomic(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.parent_path() / (".tmp-" + path.filename().string() + "-" + std::to_string(::getpid()));
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << content;
        if (!os.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string serialize(const IncidenceMatrix& m) {
    std::ostringstream ss;
    m.write(ss);
    return ss.str();
}

void emit(const JobSpec& spec, const std::string& content, std::ostream& out) {
    out << content;
    if (!spec.output_path.empty()) write_text_atomic(spec.output_path, content);
}

std::string render_divisor(long p, int i) {
    if (i == 0) return "1";
    if (i == 1) return std::to_string(p);
    return std::to_string(p) + "^" + std::to_string(i);
}

DivisorProfile profile_by_source(const JobSpec& spec, bool strict_cache) {
    if (spec.source == "formula") {
        if (spec.n_plus_1 != 4 || spec.r != 2 || spec.s != 2 || spec.relation != Relation::Skew)
            throw UsageError("the closed-form profile covers the skew lines-vs-lines matrix only "
                             "(--n 4 --r 2 --s 2 --relation skew)");
        return skew_lines_divisor_profile(spec.t, spec.p);
    }
    if (spec.source != "compute") throw UsageError("--source must be formula or compute");
    const long q = q_of(spec);
    check_size_guard(spec, q_binomial(spec.n_plus_1, spec.r, q), q_binomial(spec.n_plus_1, spec.s, q));
    const IncidenceMatrix inc = load_or_build_incidence(spec, strict_cache);
    return p_elementary_divisors(to_integer_matrix(inc), spec.p);
}

struct Reporter {
    std::ostream& out;
    bool all_ok = true;

    void run(const std::string& name, const std::function<bool()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        std::string note;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            note = e.what();
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!note.empty()) out << " -- " << note;
        out << std::fixed << std::setprecision(3) << "  (" << dt << "s)\n";
        all_ok = all_ok && ok;
    }
};

int verify_identities(const JobSpec& spec, std::ostream& out) {
    Reporter rep{out};
    const long q = q_of(spec);
    check_size_guard(spec, q_binomial(4, 2, q), q_binomial(4, 2, q));

    // the equations under test concern the lines of PG(3,q)
    JobSpec skew_spec = spec;
    skew_spec.n_plus_1 = 4;
    skew_spec.r = 2;
    skew_spec.s = 2;
    skew_spec.relation = Relation::Skew;
    JobSpec meet_spec = skew_spec;
    meet_spec.relation = Relation::Meet;

    IncidenceMatrix skew(0, 0, 0, 0, 0, Relation::Skew, {}, {});
    rep.run("generate skew and meet matrices (cache verified)", [&] {
        skew = load_or_build_incidence(skew_spec, true);
        const IncidenceMatrix meet = load_or_build_incidence(meet_spec, true);
        for (std::size_t i = 0; i < skew.rows(); ++i)
            for (std::size_t j = 0; j < skew.cols(); ++j)
                if (skew.entry(i, j) + meet.entry(i, j) != 1) return false;
        return true;
    });
    if (!rep.all_ok) return kExitCheckFailed;

    const IntegerMatrix a = to_integer_matrix(skew);
    rep.run("row sums equal q^4", [&] {
        for (std::size_t i = 0; i < skew.rows(); ++i)
            if (skew.row_sum(i) != q * q * q * q) return false;
        return true;
    });
    rep.run("adjacency equation residual is zero", [&] { return skew_square_residual(a, q).is_zero(); });

    JobSpec b_spec = skew_spec;
    b_spec.r = 1;
    JobSpec bt_spec = skew_spec;
    bt_spec.s = 1;
    const IntegerMatrix b = to_integer_matrix(load_or_build_incidence(b_spec, true));
    const IntegerMatrix bt = to_integer_matrix(load_or_build_incidence(bt_spec, true));
    const IntegerMatrix product = mat_mul(bt, b);
    rep.run("product equation residual is zero", [&] { return point_product_residual(product, a, q).is_zero(); });
    rep.run("product congruent to negated skew matrix mod q",
            [&] { return congruent_mod(product, -a, spec.p, spec.t); });
    return rep.all_ok ? kExitOk : kExitCheckFailed;
}

int verify_oracle(const JobSpec& spec, std::ostream& out) {
    Reporter rep{out};
    const long q = q_of(spec);
    check_size_guard(spec, q_binomial(4, 2, q), q_binomial(4, 2, q));

    JobSpec lines_spec = spec;
    lines_spec.n_plus_1 = 4;
    lines_spec.r = 2;
    lines_spec.s = 2;
    lines_spec.relation = Relation::Skew;

    const IntegerMatrix a = to_integer_matrix(load_or_build_incidence(lines_spec, true));
    const DivisorProfile formula = skew_lines_divisor_profile(spec.t, spec.p);
    DivisorProfile local;
    rep.run("local elimination equals the closed-form profile", [&] {
        local = p_elementary_divisors(a, spec.p);
        return local == formula;
    });
    rep.run("p-rank equals the leading multiplicity", [&] { return p_rank(a, spec.p) == formula.get(0); });

    JobSpec b_spec = lines_spec;
    b_spec.r = 1;
    JobSpec bt_spec = lines_spec;
    bt_spec.s = 1;
    const IntegerMatrix product = mat_mul(to_integer_matrix(load_or_build_incidence(bt_spec, true)),
                                          to_integer_matrix(load_or_build_incidence(b_spec, true)));
    rep.run("product profile equals the closed form", [&] {
        return p_elementary_divisors(product, spec.p) == product_divisor_profile(3, spec.t, spec.p, 2, 2);
    });

    if (a.rows() <= 150) {
        rep.run("full chain oracle agrees (lines)",
                [&] { return profile_from_chain(smith_normal_form(a), spec.p) == formula; });
        rep.run("full chain oracle agrees (product)", [&] {
            return profile_from_chain(smith_normal_form(product), spec.p) ==
                   product_divisor_profile(3, spec.t, spec.p, 2, 2);
        });
    }
    return rep.all_ok ? kExitOk : kExitCheckFailed;
}

int verify_formulas(const JobSpec& spec, std::ostream& out) {
    Reporter rep{out};
    const long q = q_of(spec);

    rep.run("coefficient tables: dual route, palindrome, total", [&] {
        for (long p : {2L, 3L, 5L, 7L}) {
            for (int n1 = 2; n1 <= 6; ++n1) {
                const CoefficientTable tab = dk_table(p, n1);  // dual route checked internally
                mpz_class total = 0, pn;
                for (int k = 0; k <= tab.degree(); ++k) {
                    total += tab.dk(k);
                    if (tab.dk(k) != tab.dk(tab.degree() - k)) return false;
                }
                mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n1));
                if (total != pn) return false;
            }
        }
        return true;
    });
    rep.run("upper multiplicities sum to q^3 + q^2 + q", [&] {
        mpz_class total = 0;
        for (const auto& [i, e] : skew_lines_upper_divisors(spec.t, spec.p)) total += e;
        return total == mpz_class(q) * q * q + mpz_class(q) * q + q;
    });
    rep.run("assembled profile symmetry and totals", [&] {
        const DivisorProfile prof = skew_lines_divisor_profile(spec.t, spec.p);
        const mpz_class qz = q, q2 = qz * qz, q3 = q2 * qz, q4 = q3 * qz;
        if (prof.total() != q4 + q3 + 2 * q2 + qz + 1) return false;
        for (int i = 0; i < spec.t; ++i)
            if (prof.get(i) != prof.get(3 * spec.t - i)) return false;
        return prof.get(4 * spec.t) == 1;
    });
    rep.run("Hamada dimension sum counts projective points", [&] {
        for (int n = 2; n <= 4; ++n) {
            mpz_class total = 0;
            for (const HamadaTuple& h : hamada_set(n, spec.t, spec.p)) total += h.d;
            mpz_class qn1;
            mpz_ui_pow_ui(qn1.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(n + 1));
            if (total != (qn1 - 1) / (q - 1) - 1) return false;
        }
        return true;
    });
    rep.run("exponent families for lines are the tuples with t-i twos", [&] {
        for (int i = 0; i <= spec.t; ++i) {
            mpz_class via_family = 0, via_twos = 0;
            for (const HamadaTuple& h : exponent_family(i, 2, 2, 3, spec.t, spec.p)) via_family += h.d;
            const CoefficientTable tab = dk_table(spec.p, 4);
            for (const auto& s : tuples_with_twos(spec.t, spec.t - i)) {
                mpz_class d = 1;
                for (int k = 0; k < spec.t; ++k) d *= tab.dk(spec.p * s[(k + 1) % spec.t] - s[k]);
                via_twos += d;
            }
            if (via_family != via_twos) return false;
        }
        return true;
    });
    rep.run("graph parameters are feasible", [&] {
        const SrgSpectrum sp = srg_spectrum(q);
        return sp.k * (sp.k - sp.lam - 1) == (sp.v - sp.k - 1) * sp.mu &&
               sp.multiplicities[0] + sp.multiplicities[1] + sp.multiplicities[2] == sp.v;
    });
    return rep.all_ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("PGSNF_CACHE_DIR"); env && *env) return env;
    return ".pgsnf-cache";
}

std::filesystem::path cache_entry_dir(const JobSpec& spec) {
    std::ostringstream name;
    name << "p" << spec.p << "_t" << spec.t << "_n" << spec.n_plus_1 << "_r" << spec.r << "_s" << spec.s << "_"
         << relation_name(spec.relation);
    return spec.cache_dir / name.str();
}

IncidenceMatrix load_or_build_incidence(const JobSpec& spec, bool strict_checksum, std::string* status) {
    validate(spec);
    auto build = [&] {
        auto geo = make_geometry(spec.p, spec.t, spec.n_plus_1);
        return build_incidence(geo, spec.r, spec.s, spec.relation);
    };
    if (spec.cache_dir.empty()) {
        if (status) *status = "uncached";
        return build();
    }

    const fs::path dir = cache_entry_dir(spec);
    const fs::path matrix_path = dir / "matrix.txt";
    const fs::path sum_path = dir / "matrix.txt.sha256";

    if (fs::exists(matrix_path) && fs::exists(sum_path)) {
        const std::string content = slurp(matrix_path);
        std::istringstream sum_line(slurp(sum_path));
        std::string recorded;
        sum_line >> recorded;
        if (recorded == sha256_hex(content)) {
            std::istringstream is(content);
            if (status) *status = "hit";
            return IncidenceMatrix::read(is);
        }
        if (strict_checksum)
            throw CacheError("cached matrix " + matrix_path.string() + " fails its checksum; refusing to use it");
        if (status) *status = "refreshed";
    } else if (status) {
        *status = "miss";
    }

    IncidenceMatrix m = build();
    const std::string content = serialize(m);
    write_text_atomic(matrix_path, content);
    write_text_atomic(sum_path, sha256_hex(content) + "  matrix.txt\n");
    return m;
}

int cmd_incidence(const JobSpec& spec, std::ostream& out, std::ostream& err) {
    validate(spec);
    const long q = q_of(spec);
    check_size_guard(spec, q_binomial(spec.n_plus_1, spec.r, q), q_binomial(spec.n_plus_1, spec.s, q));
    std::string status;
    const IncidenceMatrix m = load_or_build_incidence(spec, false, &status);
    if (!spec.cache_dir.empty()) err << "cache " << status << ": " << cache_entry_dir(spec).string() << "\n";
    emit(spec, serialize(m), out);
    return kExitOk;
}

int cmd_profile(const JobSpec& spec, std::ostream& out, std::ostream& err) {
    validate(spec);
    const DivisorProfile prof = profile_by_source(spec, false);
    const std::string text = prof.to_json() + "\n";
    if (!spec.cache_dir.empty()) {
        const fs::path path = cache_entry_dir(spec) / ("profile." + spec.source + ".json");
        write_text_atomic(path, text);
        err << "profile cached: " << path.string() << "\n";
    }
    emit(spec, text, out);
    return kExitOk;
}

int cmd_verify(const JobSpec& spec, std::ostream& out, std::ostream& err) {
    validate(spec);
    try {
        if (spec.suite == "identities") return verify_identities(spec, out);
        if (spec.suite == "oracle") return verify_oracle(spec, out);
        if (spec.suite == "formulas") return verify_formulas(spec, out);
    } catch (const CacheError& e) {
        out << "[FAIL] " << e.what() << "\n";
        return kExitCheckFailed;
    }
    (void)err;
    throw UsageError("unknown suite '" + spec.suite + "' (expected identities, oracle, or formulas)");
}

int cmd_table(const JobSpec& spec, std::ostream& out, std::ostream& err) {
    validate(spec);
    (void)err;
    const DivisorProfile prof = profile_by_source(spec, false);

    std::vector<std::string> divisors, mults;
    for (const auto& [i, e] : prof.mult) {
        divisors.push_back(render_divisor(prof.p, i));
        mults.push_back(e.get_str());
    }

    std::ostringstream table;
    if (spec.format == "text") {
        const std::string h1 = "Elem. Div.", h2 = "Multiplicity";
        table << std::left << std::setw(static_cast<int>(h2.size()) + 2) << h1;
        for (std::size_t c = 0; c < divisors.size(); ++c) {
            const int width = static_cast<int>(std::max(divisors[c].size(), mults[c].size())) + 2;
            table << std::right << std::setw(width) << divisors[c];
        }
        table << "\n" << std::left << std::setw(static_cast<int>(h2.size()) + 2) << h2;
        for (std::size_t c = 0; c < divisors.size(); ++c) {
            const int width = static_cast<int>(std::max(divisors[c].size(), mults[c].size())) + 2;
            table << std::right << std::setw(width) << mults[c];
        }
        table << "\n";
    } else if (spec.format == "csv") {
        table << "Elem. Div.";
        for (const auto& d : divisors) table << "," << d;
        table << "\nMultiplicity";
        for (const auto& m : mults) table << "," << m;
        table << "\n";
    } else if (spec.format == "json") {
        table << prof.to_json() << "\n";
    } else {
        throw UsageError("unknown format '" + spec.format + "' (expected text, csv, or json)");
    }
    emit(spec, table.str(), out);
    return kExitOk;
}

}  // namespace pgsnf::cli
