#include <CLI11.hpp>

#include <iostream>

#include "pgsnf/cli_commands.hpp"

namespace {

void add_common(CLI::App* cmd, pgsnf::cli::JobSpec& spec, std::string& relation, std::string& cache_dir,
                bool& no_cache) {
    cmd->add_option("--p", spec.p, "field characteristic (prime)");
    cmd->add_option("--t", spec.t, "extension degree, q = p^t");
    cmd->add_option("--n", spec.n_plus_1, "ambient dimension n+1")->default_val(4);
    cmd->add_option("--r", spec.r, "row subspace dimension");
    cmd->add_option("--s", spec.s, "column subspace dimension");
    cmd->add_option("--relation", relation, "skew or meet")->default_val("skew");
    cmd->add_option("--out", spec.output_path, "also write the result to this file");
    cmd->add_option("--cache-dir", cache_dir, "cache directory (default: $PGSNF_CACHE_DIR or .pgsnf-cache)");
    cmd->add_flag("--no-cache", no_cache, "disable the on-disk cache");
    cmd->add_option("--max-side", spec.max_side, "refuse to generate matrices with a larger side")->default_val(1200);
    cmd->add_flag("--force", spec.force, "override the size guard");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace pgsnf::cli;

    CLI::App app{"skew-subspace incidence matrices of PG(n,q) and their p-adic elementary divisors"};
    app.require_subcommand(1);

    JobSpec spec;
    std::string relation = "skew", cache_dir;
    bool no_cache = false;

    CLI::App* inc = app.add_subcommand("incidence", "generate an incidence matrix file");
    add_common(inc, spec, relation, cache_dir, no_cache);

    CLI::App* prof = app.add_subcommand("profile", "emit an elementary divisor profile as JSON");
    add_common(prof, spec, relation, cache_dir, no_cache);
    prof->add_option("--source", spec.source, "formula or compute")->default_val("formula");

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite, exit nonzero on failure");
    add_common(verify, spec, relation, cache_dir, no_cache);
    verify->add_option("suite", spec.suite, "identities, oracle, or formulas")->required();

    CLI::App* table = app.add_subcommand("table", "print the divisor/multiplicity table");
    add_common(table, spec, relation, cache_dir, no_cache);
    table->add_option("--source", spec.source, "formula or compute")->default_val("formula");
    table->add_option("--format", spec.format, "text, csv, or json")->default_val("text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return kExitUsage;
    }

    try {
        spec.relation = pgsnf::relation_from_name(relation);
        spec.cache_dir = no_cache ? std::filesystem::path{}
                                  : (cache_dir.empty() ? default_cache_dir() : std::filesystem::path(cache_dir));
        if (inc->parsed()) return cmd_incidence(spec, std::cout, std::cerr);
        if (prof->parsed()) return cmd_profile(spec, std::cout, std::cerr);
        if (verify->parsed()) return cmd_verify(spec, std::cout, std::cerr);
        if (table->parsed()) return cmd_table(spec, std::cout, std::cerr);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}
