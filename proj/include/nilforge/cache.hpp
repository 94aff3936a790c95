#pragma once

#include "nilforge/quotient.hpp"
#include "nilforge/version.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nilforge {

std::uint64_t fnv1a64(std::string_view data);

enum class CacheStatus { hit, miss, corrupt, version_mismatch };
std::string_view cache_status_name(CacheStatus s);

struct CacheEvent {
    std::string label;
    std::string event; // hit, miss, stored, corrupt, version_mismatch, store_failed
    std::string detail;
};

/// Text form of a quotient: schema line, code version, basis, prime, label,
/// relators, moduli, rules, and an FNV-1a-64 checksum of everything above.
std::string serialize_quotient(const FiniteQuotient& q, std::string_view code_version = kCodeVersion);

/// Whether the trailing checksum line matches the rest of a cache file.
bool checksum_ok(std::string_view text);

class CacheError : public std::runtime_error {
public:
    CacheError(CacheStatus status, const std::string& what) : std::runtime_error(what), status_(status) {}
    CacheStatus status() const { return status_; }

private:
    CacheStatus status_;
};

/// Inverse of serialize_quotient; the header must match `expected`.
/// Throws CacheError on any mismatch or damage.
FiniteQuotient parse_quotient(std::string_view text, const RelatorSet& expected,
                              std::string_view code_version = kCodeVersion);

class QuotientCache {
public:
    explicit QuotientCache(std::filesystem::path dir, std::string code_version = std::string(kCodeVersion));

    const std::filesystem::path& directory() const { return dir_; }
    /// Key: basis name, prime, label and code version.
    std::filesystem::path path_for(const RelatorSet& rel) const;

    /// Writes to a temporary file and renames it into place.
    void store(const FiniteQuotient& q) const;

    struct LoadResult {
        CacheStatus status = CacheStatus::miss;
        std::optional<FiniteQuotient> quotient;
        std::string detail;
    };
    LoadResult load(const RelatorSet& rel) const;

    /// Loads, or builds and stores; damaged files are rebuilt with an event
    /// recorded.
    QuotientPtr load_or_build(const RelatorSet& rel, std::vector<CacheEvent>& events) const;

    std::vector<std::filesystem::path> entries() const;

private:
    std::filesystem::path dir_;
    std::string version_;
};

/// Cache directory from NILFORGE_CACHE, else ./.nilforge-cache.
std::filesystem::path default_cache_dir();

} // namespace nilforge
