#include "nilforge/campaign.hpp"

#include "nilforge/dh.hpp"
#include "nilforge/series.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace nilforge {

namespace {

using Clock = std::chrono::steady_clock;

std::string dec(std::int64_t v) { return std::to_string(v); }
std::string dec(std::uint64_t v) { return std::to_string(v); }
std::string dec(const Integer& v) { return v.get_str(); }

std::string utc_now()
{
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::int64_t ipow(std::int64_t p, int e)
{
    std::int64_t v = 1;
    while (e-- > 0)
        v *= p;
    return v;
}

std::vector<std::int64_t> residues(const std::optional<std::vector<std::int64_t>>& sel, std::int64_t p)
{
    if (sel)
        return *sel;
    std::vector<std::int64_t> all;
    for (std::int64_t r = 1; r < p; ++r)
        all.push_back(r);
    return all;
}

Json residue_list(const std::set<std::int64_t>& s)
{
    Json a = Json::array();
    for (auto v : s)
        a.push_back(dec(v));
    return a;
}

Json matrix_json(const FrattiniMatrix& m)
{
    Json a = Json::array();
    for (std::size_t i = 0; i < m.n; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.n; ++j)
            row.push_back(dec(m(i, j)));
        a.push_back(row);
    }
    return a;
}

Json matrix_json(const IntMatrix& m)
{
    Json a = Json::array();
    for (std::size_t i = 0; i < m.dimension(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.dimension(); ++j)
            row.push_back(dec(m(i, j)));
        a.push_back(row);
    }
    return a;
}

template <class F>
void run_claim(Report& rep, std::string id, std::string anchor, F&& body)
{
    ClaimEntry e;
    e.claim_id = std::move(id);
    e.anchor = std::move(anchor);
    auto t0 = Clock::now();
    body(e);
    e.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    rep.claims.push_back(std::move(e));
}

void skip(ClaimEntry& e, std::string reason)
{
    e.verdict = Verdict::skipped;
    e.reason = std::move(reason);
}

void judge(ClaimEntry& e, bool ok, std::string failure)
{
    e.verdict = ok ? Verdict::pass : Verdict::fail;
    if (!ok)
        e.reason = std::move(failure);
}

void check_selection(const std::optional<std::vector<std::int64_t>>& sel, std::int64_t p, const char* name)
{
    if (!sel)
        return;
    if (sel->empty())
        throw UsageError(std::string("--") + name + " selection is empty");
    for (auto v : *sel)
        if (v < 1 || v >= p)
            throw UsageError(std::string("--") + name + " " + std::to_string(v) + " is outside [1, " +
                             std::to_string(p - 1) + "] for p = " + std::to_string(p));
}

void check_common(const CampaignConfig& c)
{
    if (c.primes.empty())
        throw UsageError("no primes selected");
    if (c.budget_pairs == 0 || c.budget_samples == 0)
        throw UsageError("budgets must be positive");
    for (auto p : c.primes) {
        check_selection(c.r, p, "r");
        check_selection(c.s, p, "s");
    }
}

GroupWord random_word(std::mt19937_64& rng, const NilpotentBasis& b)
{
    std::uniform_int_distribution<int> len(0, 20), ex(-9, 9);
    std::uniform_int_distribution<std::size_t> sym(0, b.size() - 1);
    GroupWord w;
    for (int i = len(rng); i > 0; --i)
        if (int e = ex(rng); e != 0)
            w.letters.push_back({sym(rng), e});
    return w;
}

struct TheoremContext {
    std::int64_t p;
    QuotientPtr k;
    NrFamily family;
};

TheoremContext theorem_context(std::int64_t p, const CampaignConfig& cfg, Report& rep)
{
    std::optional<QuotientCache> cache;
    if (cfg.cache_dir)
        cache.emplace(*cfg.cache_dir);
    auto build = [&](const RelatorSet& rel) {
        if (!cache)
            return std::make_shared<const FiniteQuotient>(make_quotient(rel));
        std::vector<CacheEvent> events;
        auto q = cache->load_or_build(rel, events);
        for (auto& e : events) {
            if (e.event == "corrupt" || e.event == "version_mismatch" || e.event == "store_failed")
                rep.warnings.push_back("cache " + e.event + " for " + e.label + ": " + e.detail + "; recomputed");
            rep.cache_events.push_back(std::move(e));
        }
        return QuotientPtr(q);
    };
    TheoremContext ctx{p, build(standard_relators(RelatorKind::K, p)), {}};
    ctx.family.p = p;
    ctx.family.k = ctx.k;
    for (std::int64_t r = 1; r < p; ++r)
        ctx.family.groups.push_back(std::make_shared<const FiniteGroup>(build(standard_relators(RelatorKind::N_r, p, r))));
    return ctx;
}

void theorem_prime(Report& rep, const CampaignConfig& cfg, std::int64_t p)
{
    const std::string pre = "theorem.p" + std::to_string(p) + ".";
    const auto rs = residues(cfg.r, p), ss = residues(cfg.s, p);
    const std::int64_t p4 = ipow(p, 4);
    TheoremContext ctx = theorem_context(p, cfg, rep);
    const NrFamily& fam = ctx.family;

    run_claim(rep, pre + "quotient_orders", "|F/N_r| = p^4 for every r prime to p, and |F/K| = p^5", [&](ClaimEntry& e) {
        ConsistencyOptions opt;
        opt.seed = cfg.seed;
        opt.budget_pairs = cfg.budget_pairs;
        bool ok = true;
        Json orders = Json::object(), cons = Json::object();
        auto one = [&](const FiniteQuotient& q, std::int64_t expected) {
            auto c = consistency_check(q, opt);
            ok &= q.order() == expected && c.passed;
            orders[q.label()] = dec(q.order());
            cons[q.label()] = Json{{"passed", c.passed},
                                   {"failures", dec(c.failure_count)},
                                   {"representatives_checked", dec(c.representatives_checked)},
                                   {"relator_checks", dec(c.relator_checks)},
                                   {"multiplicativity_pairs", dec(c.multiplicativity_pairs)},
                                   {"multiplicativity_exhaustive", c.multiplicativity_exhaustive},
                                   {"associativity_triples", dec(c.associativity_triples)},
                                   {"associativity_exhaustive", c.associativity_exhaustive}};
        };
        for (auto r : rs)
            one(fam.group(r).quotient(), p4);
        one(*ctx.k, p4 * p);
        e.counts = Json{{"orders", orders}, {"consistency", cons}};
        judge(e, ok, "an order or consistency check failed");
    });

    run_claim(rep, pre + "series", "F/N_r has class 3 and exponent p^2", [&](ClaimEntry& e) {
        bool ok = true;
        Json per = Json::object();
        for (auto r : rs) {
            auto s = series_invariants(fam.group(r));
            Json lcs = Json::array();
            for (auto o : s.lower_central_orders)
                lcs.push_back(dec(o));
            per[dec(r)] = Json{{"class", dec(std::int64_t{s.nilpotency_class})},
                               {"exponent", dec(s.exponent)},
                               {"lower_central_orders", lcs}};
            ok &= s.nilpotency_class == 3 && s.exponent == p * p &&
                  s.lower_central_orders == std::vector<std::int64_t>{p4, p * p, p, 1};
        }
        e.counts = Json{{"by_r", per}};
        judge(e, ok, "class or exponent differs");
    });

    run_claim(rep, pre + "isomorphism", "F/N_r and F/N_s are isomorphic for all r, s prime to p", [&](ClaimEntry& e) {
        if (p4 > kMaxSearchOrder)
            return skip(e, "order " + dec(p4) + " exceeds the exhaustive search bound " + dec(kMaxSearchOrder));
        std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
        if (cfg.all_pairs) {
            for (std::size_t i = 0; i < rs.size(); ++i)
                for (std::size_t j = i + 1; j < rs.size(); ++j)
                    pairs.emplace_back(rs[i], rs[j]);
        } else {
            for (auto r : rs)
                if (r != 1)
                    pairs.emplace_back(1, r);
        }
        std::uint64_t iso = 0;
        Json failed = Json::array();
        for (auto [a, b] : pairs) {
            SearchOptions opt;
            opt.threads = cfg.threads;
            opt.limit = 1;
            if (!all_isomorphisms(fam.group(a), fam.group(b), opt).empty())
                ++iso;
            else
                failed.push_back(Json::array({dec(a), dec(b)}));
        }
        e.counts = Json{{"mode", cfg.all_pairs ? "all_pairs" : "against_r1"},
                        {"pairs_checked", dec(std::uint64_t{pairs.size()})},
                        {"isomorphic", dec(iso)},
                        {"non_isomorphic", failed}};
        judge(e, iso == pairs.size(), "some pair is not isomorphic");
    });

    run_claim(rep, pre + "abelian_maximal", "F/N_r has p + 1 maximal subgroups and M/N_r is the unique abelian one, M = <x^p, y>^F",
              [&](ClaimEntry& e) {
                  bool ok = true;
                  Json per = Json::object();
                  for (auto r : rs) {
                      auto a = abelian_maximal_check(fam.group(r));
                      per[dec(r)] = Json{{"maximal", dec(a.maximal)},
                                         {"abelian", dec(a.abelian)},
                                         {"abelian_order", dec(a.abelian_order)},
                                         {"relators_in_m", a.relators_in_m},
                                         {"preimage_is_m", a.preimage_is_m}};
                      ok &= a.passed;
                  }
                  e.counts = Json{{"by_r", per}};
                  judge(e, ok, "maximal subgroup structure differs");
              });

    run_claim(rep, pre + "psi_congruences", "psi(K) <= K, and psi(N_r) <= N_s iff iks = r (mod p)", [&](ClaimEntry& e) {
        std::mt19937_64 rng(cfg.seed * 1000003 + static_cast<std::uint64_t>(p));
        std::uint64_t draws = cfg.budget_samples, suite_passed = 0, comparisons = 0, agreements = 0, criterion_true = 0;
        Json failures = Json::array();
        for (std::uint64_t d = 0; d < draws; ++d) {
            auto params = random_psi(p, rng);
            auto suite = psi_congruence_suite(*ctx.k, params);
            suite_passed += suite.passed;
            if (!suite.passed && failures.size() < 5)
                failures.push_back(suite.failures.front());
            auto im = params.images();
            for (auto r : rs)
                for (auto s : ss) {
                    bool crit = membership_criterion(p, r, s, params);
                    bool truth = maps_relators_into(fam.group(r).quotient().relator_set(), fam.group(s).quotient(), im);
                    ++comparisons;
                    agreements += crit == truth;
                    criterion_true += crit;
                    if (crit != truth && failures.size() < 5)
                        failures.push_back("criterion disagrees at r=" + dec(r) + " s=" + dec(s) + " " + params.to_string());
                }
        }
        e.counts = Json{{"draws", dec(draws)},
                        {"suites_passed", dec(suite_passed)},
                        {"criterion_comparisons", dec(comparisons)},
                        {"agreements", dec(agreements)},
                        {"criterion_true", dec(criterion_true)},
                        {"failures", failures}};
        judge(e, suite_passed == draws && agreements == comparisons, "congruence or criterion mismatch");
    });

    run_claim(rep, pre + "power_lemma", "(ab)^p = a^p when the class is below p and <b>^G is abelian of exponent p",
              [&](ClaimEntry& e) {
                  FiniteGroup g(ctx.k);
                  PowerLemma lemma(g);
                  Subgroup ny = normal_closure(g, {g.generator(1)});
                  std::mt19937_64 rng(cfg.seed * 1000033 + static_cast<std::uint64_t>(p));
                  std::uniform_int_distribution<FiniteGroup::Id> any(0, static_cast<FiniteGroup::Id>(g.order() - 1));
                  std::uniform_int_distribution<std::size_t> pick(0, ny.elements.size() - 1);
                  std::uint64_t n = cfg.budget_samples, passed = 0, failed = 0, skipped = 0;
                  for (std::uint64_t i = 0; i < n; ++i) {
                      auto res = lemma.check(any(rng), ny.elements[pick(rng)]);
                      passed += res.verdict == Verdict::pass;
                      failed += res.verdict == Verdict::fail;
                      skipped += res.verdict == Verdict::skipped;
                  }
                  e.counts = Json{{"group", ctx.k->label()},
                                  {"group_class", dec(std::int64_t{lemma.group_class()})},
                                  {"b_drawn_from", "<y>^G of order " + dec(ny.order())},
                                  {"instances", dec(n)},
                                  {"passed", dec(passed)},
                                  {"failed", dec(failed)},
                                  {"hypotheses_unmet", dec(skipped)}};
                  judge(e, passed == n, "some instance failed or missed the hypotheses");
              });

    run_claim(rep, pre + "orbit", "N_r and N_s are Aut(F)-conjugate iff r = s or r = p - s", [&](ClaimEntry& e) {
        if (p4 > kMaxSearchOrder)
            return skip(e, "order " + dec(p4) + " exceeds the exhaustive search bound " + dec(kMaxSearchOrder));
        SearchOptions opt;
        opt.threads = cfg.threads;
        bool ok = true;
        Json pairs = Json::array();
        for (auto r : rs)
            for (auto s : ss) {
                auto c = orbit_witness(fam, r, s, opt);
                Json j{{"r", dec(r)}, {"s", dec(s)}, {"equivalent", c.equivalent}, {"sound", c.sound()}};
                if (c.equivalent) {
                    j["witness"] = c.witness_name;
                    j["forward_verified"] = c.forward_verified;
                    j["backward_verified"] = c.backward_verified;
                    j["witness_is_automorphism"] = c.witness_is_automorphism;
                } else {
                    std::set<std::int64_t> expect{mod(r * inverse_mod(s, p), p)};
                    j["isomorphisms_examined"] = dec(c.isomorphisms_examined);
                    j["det_residues"] = residue_list(c.det_residues);
                    j["expected_det_residues"] = residue_list(expect);
                    j["all_lower_triangular"] = c.all_lower_triangular;
                    j["contradiction"] = c.contradiction;
                    ok &= c.det_residues == expect;
                }
                ok &= c.sound();
                pairs.push_back(j);
            }
        Json classes = Json::array();
        for (const auto& cl : orbit_classes(p)) {
            Json a = Json::array();
            for (auto v : cl)
                a.push_back(dec(v));
            classes.push_back(a);
        }
        e.counts = Json{{"classes", classes}, {"pairs", pairs}};
        judge(e, ok, "a certificate failed");
    });
}

void example_prime(Report& rep, const CampaignConfig& cfg, std::int64_t p)
{
    const std::string pre = "example.p" + std::to_string(p) + ".";
    const auto rs = residues(cfg.r, p), ss = residues(cfg.s, p);
    const bool scannable = ipow(p, 6) <= kMaxScanOrder;
    const bool certified = p == 5 || p == 7;
    const std::string not_scannable = "order p^6 = " + dec(ipow(p, 6)) + " exceeds the element-scan bound " + dec(kMaxScanOrder);
    const std::string not_certified = "matrix searches are certified for p in {5, 7} only";
    DhFamily fam(p);

    run_claim(rep, pre + "structure", "G = F/M_r has order p^6 and G' = Z(G) = G^p", [&](ClaimEntry& e) {
        if (!scannable)
            return skip(e, not_scannable);
        bool ok = true;
        Json per = Json::object();
        for (auto r : rs) {
            auto s = verify_structure(fam, r);
            per[dec(r)] = Json{{"order", dec(s.order)},
                               {"center_order", dec(s.center_order)},
                               {"derived_order", dec(s.derived_order)},
                               {"agemo_order", dec(s.agemo_order)},
                               {"functors_equal", s.functors_equal}};
            ok &= s.passed;
        }
        e.counts = Json{{"by_r", per}};
        judge(e, ok, "structure differs");
    });

    run_claim(rep, pre + "scaling", "x, y, z -> x^r, y^r, z^r is an isomorphism F/M_r -> F/M_1 with determinant r^3",
              [&](ClaimEntry& e) {
                  if (!scannable)
                      return skip(e, not_scannable);
                  bool ok = true;
                  Json per = Json::object();
                  for (auto r : rs) {
                      auto s = scaling_isomorphism(fam, r);
                      per[dec(r)] = Json{{"well_defined", s.well_defined},
                                         {"bijective", s.bijective},
                                         {"matrix", matrix_json(s.matrix)},
                                         {"det", dec(s.det)},
                                         {"expected_det", dec(mod(r * r * r, p))}};
                      ok &= s.passed;
                  }
                  e.counts = Json{{"by_r", per}};
                  judge(e, ok, "a scaling map failed");
              });

    auto valid_r = find_valid_r(p);
    std::optional<std::int64_t> r_obs = valid_r;
    if (cfg.r)
        for (auto r : *cfg.r)
            if (cubic_condition(p, r)) {
                r_obs = r;
                break;
            }

    run_claim(rep, pre + "cubic", "some r has r^3 != +-1 (mod p) when p != 2, 3, 7; r = 2 works", [&](ClaimEntry& e) {
        Json cubes = Json::object();
        for (std::int64_t r = 1; r < p; ++r)
            cubes[dec(r)] = dec(mod(r * r * r, p));
        e.counts = Json{{"cubes", cubes}, {"least_valid_r", valid_r ? Json(dec(*valid_r)) : Json(nullptr)}};
        if (!valid_r)
            return skip(e, "every cube is +-1 mod " + dec(p) + "; the determinant argument excludes this prime");
        judge(e, true, "");
    });

    run_claim(rep, pre + "obstruction",
              "every isomorphism F/M_r -> F/M_1 has determinant r^3 on F/F'F^p, so none lifts to Aut(F)",
              [&](ClaimEntry& e) {
                  if (!r_obs)
                      return skip(e, "no r with r^3 != +-1 mod " + dec(p));
                  if (p > kMaxLiftPrime)
                      return skip(e, not_certified);
                  std::int64_t r = *r_obs;
                  auto all = matrix_lift_search(fam, r, 1, DetFilter::all, cfg.threads);
                  auto uni = matrix_lift_search(fam, r, 1, DetFilter::unimodular, cfg.threads);
                  auto sc = scaling_isomorphism(fam, r);
                  std::set<std::int64_t> expect{mod(r * r * r, p)};
                  e.counts = Json{{"r", dec(r)},
                                  {"candidates", dec(std::uint64_t{all.candidates.size()})},
                                  {"pairs_examined", dec(all.pairs_examined)},
                                  {"matrices_examined", dec(all.matrices_examined)},
                                  {"det_residues", residue_list(all.det_residues)},
                                  {"expected_det_residues", residue_list(expect)},
                                  {"unimodular_candidates", dec(std::uint64_t{uni.candidates.size()})},
                                  {"unimodular_matrices_examined", dec(uni.matrices_examined)},
                                  {"scaling_verified", sc.passed}};
                  judge(e, !all.candidates.empty() && all.det_residues == expect && uni.candidates.empty() && sc.passed,
                        "a lift with the wrong determinant exists");
              });

    std::optional<LiftSearchResult> lift11;
    run_claim(rep, pre + "lift_group", "Aut(F/M_1) is a p-group and acts with determinant 1 on F/F'F^p",
              [&](ClaimEntry& e) {
                  if (!certified)
                      return skip(e, not_certified);
                  lift11 = matrix_lift_search(fam, 1, 1, DetFilter::all, cfg.threads);
                  auto g = lift_group_check(*lift11);
                  e.counts = Json{{"order", dec(g.order)},
                                  {"p_power", g.p_power},
                                  {"closed", g.closed},
                                  {"inverses", g.inverses},
                                  {"det_multiplicative", g.det_multiplicative},
                                  {"all_det_one", g.all_det_one},
                                  {"contains_unitriangular", g.contains_unitriangular},
                                  {"pairs_examined", dec(lift11->pairs_examined)},
                                  {"matrices_examined", dec(lift11->matrices_examined)}};
                  judge(e, g.passed && g.all_det_one && g.contains_unitriangular, "lift group check failed");
              });

    run_claim(rep, pre + "central_corrections",
              "multiplying lift images by elements of F'F^p does not change relator membership", [&](ClaimEntry& e) {
                  if (!lift11)
                      return skip(e, not_certified);
                  std::mt19937_64 rng(cfg.seed * 1000037 + static_cast<std::uint64_t>(p));
                  auto c = central_correction_check(fam, *lift11, cfg.budget_samples, rng);
                  e.counts = Json{{"trials", dec(c.trials)},
                                  {"passing_trials", dec(c.passing_trials)},
                                  {"agreements", dec(c.agreements)}};
                  judge(e, c.passed, "a central correction changed a verdict");
              });

    run_claim(rep, pre + "orbit_grid", "M_r and M_s are Aut(F)-conjugate iff r = +-s (mod p)", [&](ClaimEntry& e) {
        if (!certified)
            return skip(e, not_certified);
        bool ok = true;
        std::uint64_t contradictions = 0;
        Json pairs = Json::array();
        for (auto r : rs)
            for (auto s : ss) {
                auto c = dh_orbit_decision(fam, r, s, cfg.threads);
                Json j{{"r", dec(r)},
                       {"s", dec(s)},
                       {"decision", c.decision},
                       {"unimodular_lifts", dec(c.unimodular_lifts)},
                       {"contradiction", c.contradiction}};
                if (c.witness) {
                    j["witness"] = matrix_json(c.witness->a);
                    j["witness_det"] = dec(c.witness->det);
                }
                if (c.integer_witness) {
                    j["integer_witness"] = matrix_json(*c.integer_witness);
                    j["free_forward"] = c.free_forward;
                    j["free_backward"] = c.free_backward;
                }
                ok &= c.sound();
                contradictions += c.contradiction;
                pairs.push_back(j);
            }
        e.counts = Json{{"pairs", pairs}, {"contradictions", dec(contradictions)}};
        judge(e, ok,
              contradictions ? dec(contradictions) + " pairs with r != +-s admit a unimodular lift, verified as an automorphism of F"
                             : "a certificate failed");
    });

    run_claim(rep, pre + "characteristic", "<G',x> and <G',x,y> are characteristic in G = F/M_1", [&](ClaimEntry& e) {
        if (!lift11)
            return skip(e, not_certified);
        auto c = characteristic_check(fam, *lift11);
        Json subs = Json::array();
        for (const auto& v : c.subgroups)
            subs.push_back(Json{{"subgroup", v.name},
                                {"order", dec(v.order)},
                                {"expect_characteristic", v.expect_characteristic},
                                {"preserved_by", dec(v.preserved_by)},
                                {"moved_by", dec(v.moved_by)},
                                {"central_preserved_by", dec(v.central_preserved_by)},
                                {"central_moved_by", dec(v.central_moved_by)}});
        e.counts = Json{{"automorphisms_used", "lift group of (1, 1) and central automorphisms x_i -> x_i c, c in G'"},
                        {"lift_group_order", dec(c.lift_group_order)},
                        {"central_generators", dec(c.central_generators)},
                        {"central_generators_verified", c.central_generators_verified},
                        {"subgroups", subs}};
        judge(e, c.passed, "a subgroup was moved");
    });
}

Json config_echo(const CampaignConfig& c)
{
    auto sel = [](const std::optional<std::vector<std::int64_t>>& s) {
        if (!s)
            return Json("all");
        Json a = Json::array();
        for (auto v : *s)
            a.push_back(dec(v));
        return a;
    };
    Json primes = Json::array();
    for (auto p : c.primes)
        primes.push_back(dec(p));
    return Json{{"primes", primes},
                {"r", sel(c.r)},
                {"s", sel(c.s)},
                {"all_pairs", c.all_pairs},
                {"seed", dec(c.seed)},
                {"budget_pairs", dec(c.budget_pairs)},
                {"budget_samples", dec(c.budget_samples)}};
}

template <class F>
Report run_campaign(std::string name, const CampaignConfig& cfg, F&& per_prime)
{
    Report rep;
    rep.campaign = std::move(name);
    rep.config = cfg;
    rep.started_at = utc_now();
    auto t0 = Clock::now();
    per_prime(rep);
    rep.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    rep.finished_at = utc_now();
    return rep;
}

} // namespace

void validate_theorem_config(const CampaignConfig& c)
{
    for (auto p : c.primes)
        if (!is_prime(p) || p <= 3)
            throw UsageError("theorem campaigns need primes p > 3, got " + std::to_string(p));
    check_common(c);
}

void validate_example_config(const CampaignConfig& c)
{
    for (auto p : c.primes)
        if (!is_prime(p) || p == 2)
            throw UsageError("example campaigns need odd primes, got " + std::to_string(p));
    check_common(c);
}

Verdict Report::overall() const
{
    for (const auto& c : claims)
        if (c.verdict == Verdict::fail)
            return Verdict::fail;
    return Verdict::pass;
}

Report run_theorem_campaign(const CampaignConfig& config)
{
    validate_theorem_config(config);
    return run_campaign("verify-theorem", config, [&](Report& rep) {
        for (auto p : config.primes)
            theorem_prime(rep, config, p);
        run_claim(rep, "theorem.collection_oracle", "Hall collection agrees with the truncated Magnus series",
                  [&](ClaimEntry& e) {
                      std::uint64_t words = 10 * config.budget_samples, agree = 0;
                      Json per = Json::object();
                      for (const char* name : {"F23", "F32"}) {
                          auto b = builtin_basis(name);
                          std::mt19937_64 rng(config.seed * 1000039 + b->size());
                          std::uint64_t ok = 0;
                          for (std::uint64_t i = 0; i < words; ++i) {
                              GroupWord w = random_word(rng, *b);
                              ok += magnus_embed(collect(b, w)) == word_series(*b, w);
                          }
                          per[name] = Json{{"words", dec(words)}, {"agreements", dec(ok)}};
                          agree += ok;
                      }
                      e.counts = Json{{"by_basis", per}};
                      judge(e, agree == 2 * words, "collection differs from the series oracle");
                  });
    });
}

Report run_example_campaign(const CampaignConfig& config)
{
    validate_example_config(config);
    return run_campaign("verify-example", config, [&](Report& rep) {
        for (auto p : config.primes)
            example_prime(rep, config, p);
    });
}

Json report_body(const Report& r)
{
    Json cfg = config_echo(r.config);
    std::string id = r.campaign + "-" + [&] {
        std::ostringstream os;
        os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(cfg.dump());
        return os.str();
    }();
    Json claims = Json::array();
    for (const auto& c : r.claims) {
        Json j{{"claim_id", c.claim_id}, {"anchor", c.anchor}, {"verdict", std::string(verdict_name(c.verdict))}};
        if (!c.reason.empty())
            j["reason"] = c.reason;
        j["counts"] = c.counts;
        claims.push_back(j);
    }
    return Json{{"campaign", r.campaign},
                {"campaign_id", id},
                {"code_version", std::string(kCodeVersion)},
                {"config", cfg},
                {"claims", claims},
                {"overall_verdict", std::string(verdict_name(r.overall()))}};
}

Json report_header(const Report& r)
{
    Json timings = Json::object();
    for (const auto& c : r.claims)
        timings[c.claim_id] = c.elapsed_seconds;
    Json events = Json::array();
    for (const auto& e : r.cache_events)
        events.push_back(Json{{"label", e.label}, {"event", e.event}, {"detail", e.detail}});
    return Json{{"started_at", r.started_at},
                {"finished_at", r.finished_at},
                {"elapsed_seconds", r.elapsed_seconds},
                {"cache_dir", r.config.cache_dir ? Json(r.config.cache_dir->string()) : Json(nullptr)},
                {"timings", timings},
                {"cache_events", events},
                {"warnings", r.warnings}};
}

std::string render_report(const Report& r, OutputFormat format)
{
    if (format == OutputFormat::json) {
        Json doc{{"schema", std::string(kReportSchema)}, {"header", report_header(r)}, {"body", report_body(r)}};
        return doc.dump(2) + "\n";
    }
    Json body = report_body(r);
    std::ostringstream os;
    os << kReportSchema << " " << r.campaign << " " << body["campaign_id"].get<std::string>() << "\n";
    os << "started " << r.started_at << ", " << std::fixed << std::setprecision(2) << r.elapsed_seconds << " s\n";
    for (const auto& w : r.warnings)
        os << "warning: " << w << "\n";
    for (const auto& c : r.claims) {
        os << "[" << verdict_name(c.verdict) << "] " << c.claim_id << " (" << std::setprecision(2) << c.elapsed_seconds
           << " s)\n";
        os << "    " << c.anchor << "\n";
        if (!c.reason.empty())
            os << "    reason: " << c.reason << "\n";
        os << "    " << c.counts.dump() << "\n";
    }
    os << "overall: " << verdict_name(r.overall()) << "\n";
    return os.str();
}

int exit_code(const Report& r)
{
    return r.overall() == Verdict::fail ? 1 : 0;
}

} // namespace nilforge
