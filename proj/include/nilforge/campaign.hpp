#pragma once

#include "nilforge/cache.hpp"
#include "nilforge/orbit.hpp"

#include <json.hpp> // vendored nlohmann/json

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilforge {

using Json = nlohmann::ordered_json;

/// Bad configuration; the CLI maps it to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { json, text };

struct CampaignConfig {
    std::vector<std::int64_t> primes;
    std::optional<std::vector<std::int64_t>> r, s; // nullopt: all residues
    bool all_pairs = false;
    std::uint64_t seed = 1;
    std::uint64_t budget_pairs = 1'000'000;
    std::uint64_t budget_samples = 1'000;
    std::optional<std::filesystem::path> cache_dir; // nullopt: no cache
    OutputFormat format = OutputFormat::json;
    unsigned threads = 0;
};

inline const std::vector<std::int64_t> kDefaultTheoremPrimes{5, 7};
inline const std::vector<std::int64_t> kDefaultExamplePrimes{5};

void validate_theorem_config(const CampaignConfig& c);
void validate_example_config(const CampaignConfig& c);

struct ClaimEntry {
    std::string claim_id;
    std::string anchor;
    Verdict verdict = Verdict::skipped;
    std::string reason; // for skipped and failed entries
    Json counts = Json::object();
    double elapsed_seconds = 0; // header only
};

struct Report {
    std::string campaign;
    CampaignConfig config;
    std::vector<ClaimEntry> claims;
    std::vector<CacheEvent> cache_events;
    std::vector<std::string> warnings;
    std::string started_at, finished_at;
    double elapsed_seconds = 0;

    /// fail if any entry fails, otherwise pass (skipped entries carry reasons).
    Verdict overall() const;
};

Report run_theorem_campaign(const CampaignConfig& config);
Report run_example_campaign(const CampaignConfig& config);

/// Deterministic part: schema, campaign id, config echo, claims, verdict.
Json report_body(const Report& r);
/// Timestamps, timings, cache events, warnings.
Json report_header(const Report& r);
std::string render_report(const Report& r, OutputFormat format);

/// 0 pass, 1 claim failure.
int exit_code(const Report& r);

} // namespace nilforge
