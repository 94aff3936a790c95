#include "nilforge/cache.hpp"
#include "nilforge/campaign.hpp"
#include "nilforge/dh.hpp"
#include "nilforge/word_parser.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace nilforge;

namespace {

struct Options {
    std::vector<std::int64_t> primes, r, s;
    bool all_pairs = false;
    std::uint64_t seed = 1;
    std::uint64_t budget_pairs = 1'000'000;
    std::uint64_t budget_samples = 1'000;
    std::string format = "json";
    std::string cache_dir;
    bool no_cache = false;
    unsigned threads = 0;
    std::string output;
};

void add_format(CLI::App* cmd, Options& o)
{
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
}

void add_cache(CLI::App* cmd, Options& o)
{
    cmd->add_option("--cache-dir", o.cache_dir, "Cache directory (default: $NILFORGE_CACHE or ./.nilforge-cache)");
}

void add_campaign_options(CLI::App* cmd, Options& o)
{
    cmd->add_option("--prime", o.primes, "Primes to verify (repeatable)");
    cmd->add_option("--r", o.r, "Restrict r (repeatable)");
    cmd->add_option("--s", o.s, "Restrict s (repeatable)");
    cmd->add_flag("--all-pairs", o.all_pairs, "Check isomorphism for every pair, not only against r = 1");
    cmd->add_option("--seed", o.seed, "Seed for sampled checks");
    cmd->add_option("--budget-pairs", o.budget_pairs, "Pair budget for exhaustive consistency checks");
    cmd->add_option("--budget-samples", o.budget_samples, "Random draws per sampled claim");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--output", o.output, "Write the report to this file instead of stdout");
    cmd->add_flag("--no-cache", o.no_cache, "Do not read or write cached quotients");
    add_format(cmd, o);
    add_cache(cmd, o);
}

std::filesystem::path cache_dir(const Options& o)
{
    return o.cache_dir.empty() ? default_cache_dir() : std::filesystem::path(o.cache_dir);
}

OutputFormat format_of(const Options& o)
{
    return o.format == "text" ? OutputFormat::text : OutputFormat::json;
}

CampaignConfig config_of(const Options& o, const std::vector<std::int64_t>& default_primes)
{
    CampaignConfig c;
    c.primes = o.primes.empty() ? default_primes : o.primes;
    if (!o.r.empty())
        c.r = o.r;
    if (!o.s.empty())
        c.s = o.s;
    c.all_pairs = o.all_pairs;
    c.seed = o.seed;
    c.budget_pairs = o.budget_pairs;
    c.budget_samples = o.budget_samples;
    if (!o.no_cache)
        c.cache_dir = cache_dir(o);
    c.format = format_of(o);
    c.threads = o.threads;
    return c;
}

void emit(const Options& o, const std::string& text)
{
    if (o.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.output, std::ios::binary);
    out << text;
    if (!out)
        throw std::runtime_error("cannot write " + o.output);
}

int run_campaign(const Options& o, bool theorem)
{
    auto cfg = config_of(o, theorem ? kDefaultTheoremPrimes : kDefaultExamplePrimes);
    Report rep = theorem ? run_theorem_campaign(cfg) : run_example_campaign(cfg);
    emit(o, render_report(rep, cfg.format));
    return exit_code(rep);
}

RelatorKind kind_of(const std::string& k)
{
    if (k == "N_r")
        return RelatorKind::N_r;
    if (k == "K")
        return RelatorKind::K;
    if (k == "M")
        return RelatorKind::M;
    return RelatorKind::DH_M_r;
}

int quotient_info(const Options& o, const std::string& kind)
{
    if (o.primes.size() != 1)
        throw UsageError("quotient-info takes exactly one --prime");
    std::int64_t r = o.r.empty() ? 1 : o.r.front();
    RelatorSet rel;
    try {
        rel = standard_relators(kind_of(kind), o.primes.front(), r);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::vector<CacheEvent> events;
    QuotientPtr q = o.no_cache ? std::make_shared<const FiniteQuotient>(make_quotient(rel))
                               : QuotientCache(cache_dir(o)).load_or_build(rel, events);
    ConsistencyOptions opt;
    opt.seed = o.seed;
    opt.budget_pairs = o.budget_pairs;
    auto c = consistency_check(*q, opt);
    Json moduli = Json::array(), rules = Json::array(), evs = Json::array();
    for (auto m : q->moduli())
        moduli.push_back(std::to_string(m));
    for (std::size_t k = 0; k < q->symbol_count(); ++k)
        if (q->moduli()[k] > 1)
            rules.push_back(q->rule_string(k));
    for (const auto& e : events)
        evs.push_back(Json{{"event", e.event}, {"detail", e.detail}});
    Json body{{"label", q->label()},
              {"basis", q->basis().name()},
              {"order", q->order().get_str()},
              {"moduli", moduli},
              {"rules", rules},
              {"consistent", c.passed},
              {"consistency_failures", std::to_string(c.failure_count)}};
    if (format_of(o) == OutputFormat::json) {
        emit(o, Json{{"schema", std::string(kReportSchema)}, {"header", Json{{"cache_events", evs}}}, {"body", body}}.dump(2) +
                    "\n");
    } else {
        std::ostringstream os;
        os << q->label() << " in " << q->basis().name() << ": order " << q->order() << "\n";
        os << "moduli " << moduli.dump() << "\n";
        for (const auto& rule : rules)
            os << "  " << rule.get<std::string>() << "\n";
        os << "consistency " << (c.passed ? "pass" : "fail") << "\n";
        emit(o, os.str());
    }
    return c.passed ? 0 : 1;
}

int orbit(const Options& o, bool example)
{
    if (o.primes.size() != 1 || o.r.size() != 1 || o.s.size() != 1)
        throw UsageError("orbit takes exactly one --prime, --r and --s");
    std::int64_t p = o.primes.front(), r = o.r.front(), s = o.s.front();
    if (!is_prime(p) || p < 3 || r < 1 || r >= p || s < 1 || s >= p)
        throw UsageError("need an odd prime p and 1 <= r, s < p");
    Json body;
    bool sound = false;
    if (example) {
        DhFamily fam(p);
        auto c = dh_orbit_decision(fam, r, s, o.threads);
        body = Json{{"family", "F/M_r"},
                    {"p", std::to_string(p)},
                    {"r", std::to_string(r)},
                    {"s", std::to_string(s)},
                    {"decision", c.decision},
                    {"certified", c.certified},
                    {"unimodular_lifts", std::to_string(c.unimodular_lifts)},
                    {"contradiction", c.contradiction}};
        if (c.witness)
            body["witness"] = c.witness->a.to_string();
        if (c.integer_witness) {
            body["integer_witness"] = c.integer_witness->to_string();
            body["free_forward"] = c.free_forward;
            body["free_backward"] = c.free_backward;
        }
        sound = c.sound();
    } else {
        if (p <= 3)
            throw UsageError("the F/N_r family needs p > 3");
        auto fam = make_nr_family(p);
        SearchOptions opt;
        opt.threads = o.threads;
        auto c = orbit_witness(fam, r, s, opt);
        Json dets = Json::array();
        for (auto d : c.det_residues)
            dets.push_back(std::to_string(d));
        body = Json{{"family", "F/N_r"},
                    {"p", std::to_string(p)},
                    {"r", std::to_string(r)},
                    {"s", std::to_string(s)},
                    {"equivalent", c.equivalent}};
        if (c.equivalent) {
            body["witness"] = c.witness_name;
            body["forward_verified"] = c.forward_verified;
            body["backward_verified"] = c.backward_verified;
        } else {
            body["isomorphisms_examined"] = std::to_string(c.isomorphisms_examined);
            body["det_residues"] = dets;
            body["all_lower_triangular"] = c.all_lower_triangular;
        }
        sound = c.sound();
    }
    body["sound"] = sound;
    if (format_of(o) == OutputFormat::json) {
        emit(o, Json{{"schema", std::string(kReportSchema)}, {"body", body}}.dump(2) + "\n");
    } else {
        std::ostringstream os;
        for (const auto& [k, v] : body.items())
            os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        emit(o, os.str());
    }
    return sound ? 0 : 1;
}

int collect_word(const std::string& basis, const std::string& word)
{
    BasisPtr b;
    try {
        b = builtin_basis(basis);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    try {
        std::cout << parse_word(b, word).to_string() << "\n";
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n  " << word << "\n  " << std::string(e.position(), ' ') << "^\n";
        return 2;
    }
    return 0;
}

int cache_action(const Options& o, const std::string& action)
{
    QuotientCache cache(cache_dir(o));
    if (action == "path") {
        std::cout << cache.directory().string() << "\n";
        return 0;
    }
    auto files = cache.entries();
    if (action == "clear") {
        for (const auto& f : files)
            std::filesystem::remove(f);
        std::cout << "removed " << files.size() << " files from " << cache.directory().string() << "\n";
        return 0;
    }
    // list: one line per file with its checksum status
    int bad = 0;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        bool ok = checksum_ok(text);
        bad += !ok;
        std::string label = "?";
        if (auto at = text.find("\nlabel "); at != std::string::npos)
            label = text.substr(at + 7, text.find('\n', at + 1) - at - 7);
        std::cout << f.filename().string() << "  " << (ok ? "ok" : "corrupt") << "  " << label << "\n";
    }
    return bad ? 1 : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Verification campaigns for two families of finite p-group quotients"};
    app.require_subcommand(1);
    Options o;

    auto* theorem = app.add_subcommand("verify-theorem", "Check the F/N_r claims (default primes 5, 7)");
    add_campaign_options(theorem, o);
    auto* example = app.add_subcommand("verify-example", "Check the F/M_r claims (default prime 5)");
    add_campaign_options(example, o);

    std::string kind = "N_r";
    auto* qinfo = app.add_subcommand("quotient-info", "Presentation and consistency of one quotient");
    qinfo->add_option("--kind", kind, "Relator family")->check(CLI::IsMember({"N_r", "K", "M", "M_r"}));
    qinfo->add_option("--prime", o.primes, "Prime")->required();
    qinfo->add_option("--r", o.r, "Parameter r");
    qinfo->add_option("--seed", o.seed, "Seed for sampled checks");
    qinfo->add_option("--budget-pairs", o.budget_pairs, "Pair budget for exhaustive checks");
    qinfo->add_flag("--no-cache", o.no_cache, "Do not read or write cached quotients");
    add_format(qinfo, o);
    add_cache(qinfo, o);

    bool orbit_example = false;
    auto* orb = app.add_subcommand("orbit", "Orbit certificate for one pair (r, s)");
    orb->add_option("--prime", o.primes, "Prime")->required();
    orb->add_option("--r", o.r, "r")->required();
    orb->add_option("--s", o.s, "s")->required();
    orb->add_flag("--example", orbit_example, "Use the F/M_r family instead of F/N_r");
    orb->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    add_format(orb, o);

    std::string basis = "F23", word;
    auto* coll = app.add_subcommand("collect", "Hall normal form of a word");
    coll->add_option("--basis", basis, "Basis: F23 or F32");
    coll->add_option("word", word, "Word, e.g. \"(x*y)^2\" or \"[y,x,y]\"")->required();

    std::string action = "list";
    auto* cache = app.add_subcommand("cache", "Inspect the quotient cache");
    cache->add_option("action", action, "list, clear or path")->check(CLI::IsMember({"list", "clear", "path"}));
    add_cache(cache, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*theorem)
            return run_campaign(o, true);
        if (*example)
            return run_campaign(o, false);
        if (*qinfo)
            return quotient_info(o, kind);
        if (*orb)
            return orbit(o, orbit_example);
        if (*coll)
            return collect_word(basis, word);
        if (*cache)
            return cache_action(o, action);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
