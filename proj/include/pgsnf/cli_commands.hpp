#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "pgsnf/subspaces.hpp"

namespace pgsnf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Parameter or usage problem; the front end maps this to exit code 2.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct JobSpec {
    long p = 2;
    int t = 1;
    int n_plus_1 = 4;
    int r = 2;
    int s = 2;
    Relation relation = Relation::Skew;
    std::string source = "formula";  // profile/table: formula | compute
    std::string suite;               // verify: identities | oracle | formulas
    std::string format = "text";     // table: text | csv | json
    std::string output_path;         // in addition to stdout; empty = stdout only
    std::filesystem::path cache_dir;  // empty = caching disabled
    long max_side = 1200;
    bool force = false;  // override the matrix-size guard
};

/// $PGSNF_CACHE_DIR if set, else ".pgsnf-cache".
std::filesystem::path default_cache_dir();

/// One directory per parameter tuple, e.g. "p2_t1_n4_r2_s2_skew".
std::filesystem::path cache_entry_dir(const JobSpec& spec);

/// Cache-aware matrix access.  With strict_checksum the caller treats a
/// corrupted cache entry as a failure (throws CacheError); otherwise the
/// entry is rebuilt in place.  Writes are atomic (temp file then rename).
struct CacheError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
IncidenceMatrix load_or_build_incidence(const JobSpec& spec, bool strict_checksum, std::string* status = nullptr);

// Subcommands return kExitOk or kExitCheckFailed and throw UsageError for
// invalid parameters.
int cmd_incidence(const JobSpec& spec, std::ostream& out, std::ostream& err);
int cmd_profile(const JobSpec& spec, std::ostream& out, std::ostream& err);
int cmd_verify(const JobSpec& spec, std::ostream& out, std::ostream& err);
int cmd_table(const JobSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace pgsnf::cli
