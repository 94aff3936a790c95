#include "nilforge/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace nilforge {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string_view cache_status_name(CacheStatus s)
{
    switch (s) {
    case CacheStatus::hit:
        return "hit";
    case CacheStatus::miss:
        return "miss";
    case CacheStatus::corrupt:
        return "corrupt";
    case CacheStatus::version_mismatch:
        return "version_mismatch";
    }
    return "?";
}

namespace {

std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

// Splits off "key rest-of-line" and checks the key.
std::string field(std::istringstream& in, std::string_view key)
{
    std::string line;
    if (!std::getline(in, line))
        throw CacheError(CacheStatus::corrupt, "missing field " + std::string(key));
    if (line.compare(0, key.size(), key) != 0 || (line.size() > key.size() && line[key.size()] != ' '))
        throw CacheError(CacheStatus::corrupt, "expected field " + std::string(key) + ", got '" + line + "'");
    return line.size() > key.size() ? line.substr(key.size() + 1) : std::string();
}

std::size_t count_field(std::istringstream& in, std::string_view key)
{
    std::string v = field(in, key);
    try {
        std::size_t used = 0;
        auto n = std::stoul(v, &used);
        if (used != v.size() || n > 4096)
            throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw CacheError(CacheStatus::corrupt, "bad count in field " + std::string(key));
    }
}

template <class T>
std::vector<T> numbers(const std::string& line, std::size_t expected)
{
    std::istringstream in(line);
    std::vector<T> out;
    std::string tok;
    while (in >> tok) {
        try {
            if constexpr (std::is_same_v<T, Integer>) {
                out.emplace_back(tok);
            } else {
                std::size_t used = 0;
                out.push_back(std::stoll(tok, &used));
                if (used != tok.size())
                    throw std::invalid_argument(tok);
            }
        } catch (const std::exception&) {
            throw CacheError(CacheStatus::corrupt, "bad number '" + tok + "'");
        }
    }
    if (out.size() != expected)
        throw CacheError(CacheStatus::corrupt, "expected " + std::to_string(expected) + " numbers, got " +
                                                   std::to_string(out.size()));
    return out;
}

std::string line_of(std::istringstream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw CacheError(CacheStatus::corrupt, "truncated file");
    return line;
}

} // namespace

std::string serialize_quotient(const FiniteQuotient& q, std::string_view code_version)
{
    std::ostringstream os;
    const auto& rel = q.relator_set();
    const std::size_t n = q.symbol_count();
    os << kCacheSchema << "\n";
    os << "code_version " << code_version << "\n";
    os << "basis " << q.basis().name() << "\n";
    os << "prime " << q.prime() << "\n";
    os << "label " << q.label() << "\n";
    os << "relators " << rel.relators.size() << "\n";
    for (const auto& r : rel.relators) {
        for (std::size_t s = 0; s < n; ++s)
            os << (s ? " " : "") << r[s];
        os << "\n";
    }
    os << "moduli";
    for (auto m : q.moduli())
        os << " " << m;
    os << "\n";
    os << "rules " << q.rules().size() << "\n";
    for (const auto& r : q.rules()) {
        for (std::size_t s = 0; s < n; ++s)
            os << (s ? " " : "") << r[s];
        os << "\n";
    }
    std::string body = os.str();
    return body + "checksum " + hex64(fnv1a64(body)) + "\n";
}

bool checksum_ok(std::string_view text)
{
    auto at = text.rfind("checksum ");
    if (at == std::string_view::npos)
        return false;
    std::string stored(text.substr(at + 9));
    while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r'))
        stored.pop_back();
    return stored == hex64(fnv1a64(text.substr(0, at)));
}

FiniteQuotient parse_quotient(std::string_view text, const RelatorSet& expected, std::string_view code_version)
{
    if (!checksum_ok(text))
        throw CacheError(CacheStatus::corrupt, "checksum missing or wrong");
    std::string_view body = text.substr(0, text.rfind("checksum "));

    std::istringstream in{std::string(body)};
    if (line_of(in) != kCacheSchema)
        throw CacheError(CacheStatus::version_mismatch, "unknown schema");
    std::string version = field(in, "code_version");
    if (version != code_version)
        throw CacheError(CacheStatus::version_mismatch,
                         "written by version " + version + ", current " + std::string(code_version));
    if (field(in, "basis") != expected.basis->name())
        throw CacheError(CacheStatus::corrupt, "basis differs");
    if (field(in, "prime") != std::to_string(expected.prime))
        throw CacheError(CacheStatus::corrupt, "prime differs");
    if (field(in, "label") != expected.label)
        throw CacheError(CacheStatus::corrupt, "label differs");
    const std::size_t n = expected.basis->size();
    std::size_t nrel = count_field(in, "relators");
    if (nrel != expected.relators.size())
        throw CacheError(CacheStatus::corrupt, "relator count differs");
    for (std::size_t i = 0; i < nrel; ++i) {
        auto v = numbers<Integer>(line_of(in), n);
        if (FreeNilElement(expected.basis, std::span<const Integer>(v)) != expected.relators[i])
            throw CacheError(CacheStatus::corrupt, "relator " + std::to_string(i) + " differs");
    }
    auto moduli = numbers<std::int64_t>(field(in, "moduli"), n);
    std::size_t nrules = count_field(in, "rules");
    if (nrules != n)
        throw CacheError(CacheStatus::corrupt, "rule count differs");
    std::vector<Exponents<std::int64_t>> rules;
    for (std::size_t i = 0; i < nrules; ++i) {
        auto v = numbers<std::int64_t>(line_of(in), n);
        Exponents<std::int64_t> e{};
        std::copy(v.begin(), v.end(), e.begin());
        rules.push_back(e);
    }
    std::string rest;
    if (std::getline(in, rest))
        throw CacheError(CacheStatus::corrupt, "trailing data");
    try {
        return FiniteQuotient::from_rules(expected, std::move(moduli), std::move(rules));
    } catch (const std::exception& e) {
        throw CacheError(CacheStatus::corrupt, std::string("invalid presentation: ") + e.what());
    }
}

QuotientCache::QuotientCache(fs::path dir, std::string code_version) : dir_(std::move(dir)), version_(std::move(code_version)) {}

fs::path QuotientCache::path_for(const RelatorSet& rel) const
{
    std::string key = rel.basis->name() + "|" + std::to_string(rel.prime) + "|" + rel.label + "|" + version_;
    return dir_ / ("q-" + hex64(fnv1a64(key)) + ".nfq");
}

void QuotientCache::store(const FiniteQuotient& q) const
{
    fs::create_directories(dir_);
    fs::path target = path_for(q.relator_set());
    std::random_device rd;
    fs::path tmp = target;
    tmp += ".tmp" + hex64((std::uint64_t{rd()} << 32) | rd());
    {
        std::ofstream out(tmp, std::ios::binary);
        out << serialize_quotient(q, version_);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
}

QuotientCache::LoadResult QuotientCache::load(const RelatorSet& rel) const
{
    LoadResult res;
    fs::path path = path_for(rel);
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return res;
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        res.quotient.emplace(parse_quotient(ss.str(), rel, version_));
        res.status = CacheStatus::hit;
    } catch (const CacheError& e) {
        res.status = e.status();
        res.detail = e.what();
    }
    return res;
}

QuotientPtr QuotientCache::load_or_build(const RelatorSet& rel, std::vector<CacheEvent>& events) const
{
    auto res = load(rel);
    if (res.status == CacheStatus::hit) {
        events.push_back({rel.label, "hit", path_for(rel).filename().string()});
        return std::make_shared<FiniteQuotient>(std::move(*res.quotient));
    }
    events.push_back({rel.label, std::string(cache_status_name(res.status)), res.detail});
    auto q = std::make_shared<FiniteQuotient>(make_quotient(rel));
    try {
        store(*q);
        events.push_back({rel.label, "stored", path_for(rel).filename().string()});
    } catch (const std::exception& e) {
        events.push_back({rel.label, "store_failed", e.what()});
    }
    return q;
}

std::vector<fs::path> QuotientCache::entries() const
{
    std::vector<fs::path> out;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir_, ec))
        if (e.path().extension() == ".nfq")
            out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

fs::path default_cache_dir()
{
    if (const char* env = std::getenv("NILFORGE_CACHE"); env && *env)
        return env;
    return ".nilforge-cache";
}

} // namespace nilforge
