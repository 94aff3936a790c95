#include "nilforge/dh.hpp"

#include <algorithm>
#include <array>

namespace nilforge {

namespace {

using Id = FiniteGroup::Id;
using Vec = std::array<std::int64_t, 3>;

std::int64_t det3(const std::array<Vec, 3>& c, std::int64_t p)
{
    // columns c[0], c[1], c[2]
    std::int64_t d = c[0][0] * (c[1][1] * c[2][2] - c[2][1] * c[1][2]) - c[1][0] * (c[0][1] * c[2][2] - c[2][1] * c[0][2]) +
                     c[2][0] * (c[0][1] * c[1][2] - c[1][1] * c[0][2]);
    return mod(d, p);
}

bool independent2(const Vec& u, const Vec& v, std::int64_t p)
{
    return mod(u[1] * v[2] - u[2] * v[1], p) != 0 || mod(u[2] * v[0] - u[0] * v[2], p) != 0 ||
           mod(u[0] * v[1] - u[1] * v[0], p) != 0;
}

Vec decode(std::size_t v, std::int64_t p)
{
    auto n = static_cast<std::int64_t>(v);
    return {n % p, (n / p) % p, n / (p * p)};
}

FrattiniMatrix from_columns(const std::array<Vec, 3>& c, std::int64_t p)
{
    FrattiniMatrix m{p, 3, std::vector<std::int64_t>(9)};
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i)
            m.a[i * 3 + j] = c[j][i];
    return m;
}

Vec column(const FrattiniMatrix& a, std::size_t j)
{
    return {a(0, j), a(1, j), a(2, j)};
}

// Image of the monomial x^a y^b z^c in g.
Id monomial(const FiniteGroup& g, const Vec& v)
{
    Id out = 0;
    for (std::size_t i = 0; i < 3; ++i)
        out = g.mul(out, g.pow(g.generator(i), v[i]));
    return out;
}

void check_r(std::int64_t p, std::int64_t r)
{
    if (mod(r, p) == 0)
        throw std::invalid_argument("r must be prime to p");
}

} // namespace

DhFamily::DhFamily(std::int64_t p) : p_(p), groups_(static_cast<std::size_t>(p > 1 ? p - 1 : 0))
{
    if (p % 2 == 0 || !is_prime(p))
        throw std::invalid_argument("the Example needs an odd prime, got " + std::to_string(p));
}

GroupPtr DhFamily::group_ptr(std::int64_t r) const
{
    check_r(p_, r);
    std::int64_t rr = mod(r, p_);
    std::lock_guard lock(mutex_);
    auto& slot = groups_[static_cast<std::size_t>(rr - 1)];
    if (!slot)
        slot = make_group(standard_relators(RelatorKind::DH_M_r, p_, rr));
    return slot;
}

StructureReport verify_structure(const DhFamily& family, std::int64_t r)
{
    const FiniteGroup& g = family.group(r);
    const std::int64_t p = family.prime();
    StructureReport rep;
    rep.p = p;
    rep.r = r;
    rep.order = g.order();
    auto f = subgroup_functors(g);
    rep.center_order = f.center.order();
    rep.derived_order = f.derived.order();
    rep.agemo_order = f.agemo.order();
    rep.functors_equal = f.center == f.derived && f.center == f.agemo;
    rep.passed = rep.order == p * p * p * p * p * p && rep.functors_equal && rep.center_order == p * p * p;
    return rep;
}

ScalingReport scaling_isomorphism(const DhFamily& family, std::int64_t r)
{
    const std::int64_t p = family.prime();
    const FiniteGroup& src = family.group(r);
    const FiniteGroup& dst = family.group(1);
    ScalingReport rep;
    rep.p = p;
    rep.r = r;
    std::vector<Id> images;
    for (std::size_t i = 0; i < 3; ++i)
        images.push_back(dst.pow(dst.generator(i), r));
    rep.map = Homomorphism{&src, &dst, images};
    rep.well_defined = preserves_relations(src, dst, images);
    if (!rep.well_defined)
        return rep;
    rep.bijective = is_bijective(rep.map);
    rep.matrix = induced_frattini_matrix(rep.map);
    rep.det = rep.matrix.det();
    FrattiniMatrix scalar{p, 3, std::vector<std::int64_t>(9, 0)};
    for (std::size_t i = 0; i < 3; ++i)
        scalar.a[i * 4] = mod(r, p);
    rep.passed = rep.bijective && rep.matrix == scalar && rep.det == mod(r * r * r, p);
    return rep;
}

bool cubic_condition(std::int64_t p, std::int64_t r)
{
    std::int64_t c = mod(mod(r, p) * mod(r, p) % p * mod(r, p), p);
    return c != 1 && c != mod(-1, p);
}

std::optional<std::int64_t> find_valid_r(std::int64_t p)
{
    for (std::int64_t r = 1; r < p; ++r)
        if (cubic_condition(p, r))
            return r;
    return std::nullopt;
}

std::string_view det_filter_name(DetFilter f)
{
    return f == DetFilter::all ? "all" : "unimodular";
}

std::vector<FreeNilElement> MatrixLiftCandidate::lift() const
{
    auto b = builtin_basis("F32");
    std::vector<FreeNilElement> out;
    for (std::size_t j = 0; j < 3; ++j) {
        FreeNilElement g(b);
        for (std::size_t i = 0; i < 3; ++i)
            g = g * FreeNilElement::symbol(b, i, a(i, j));
        out.push_back(g);
    }
    return out;
}

LiftSearchResult matrix_lift_search(const DhFamily& family, std::int64_t r, std::int64_t s, DetFilter filter,
                                    unsigned threads)
{
    const std::int64_t p = family.prime();
    if (p > kMaxLiftPrime)
        throw std::length_error("matrix lift search is limited to p <= " + std::to_string(kMaxLiftPrime));
    const FiniteGroup& target = family.group(s);
    const RelatorSet& rel = family.group(r).quotient().relator_set();
    RelatorSchedule schedule(rel);

    const auto nvec = static_cast<std::size_t>(p * p * p);
    std::vector<Id> mono(nvec);
    std::vector<Vec> vecs(nvec);
    for (std::size_t v = 0; v < nvec; ++v) {
        vecs[v] = decode(v, p);
        mono[v] = monomial(target, vecs[v]);
    }
    auto relators_hold = [&](std::size_t depth, const std::vector<Id>& images) {
        for (auto ri : schedule.at_depth(depth))
            if (evaluate_relator(target, rel, ri, images) != 0)
                return false;
        return true;
    };

    struct Chunk {
        std::uint64_t pairs = 0, matrices = 0;
        std::vector<MatrixLiftCandidate> found;
    };
    // first columns 1..nvec-1, one chunk each
    std::vector<Chunk> chunks(nvec - 1);
    parallel_chunks(
        nvec - 1, threads,
        [&](std::size_t begin, std::size_t end, std::size_t) {
            for (std::size_t i = begin; i < end; ++i) {
                Chunk& out = chunks[i];
                const std::size_t v1 = i + 1;
                std::vector<Id> images{mono[v1], 0, 0};
                if (!relators_hold(0, images))
                    continue;
                for (std::size_t v2 = 1; v2 < nvec; ++v2) {
                    if (!independent2(vecs[v1], vecs[v2], p))
                        continue;
                    ++out.pairs;
                    images[1] = mono[v2];
                    images[2] = 0;
                    if (!relators_hold(1, images))
                        continue;
                    for (std::size_t v3 = 1; v3 < nvec; ++v3) {
                        std::array<Vec, 3> cols{vecs[v1], vecs[v2], vecs[v3]};
                        std::int64_t d = det3(cols, p);
                        if (d == 0)
                            continue;
                        if (filter == DetFilter::unimodular && d != 1 && d != p - 1)
                            continue;
                        ++out.matrices;
                        images[2] = mono[v3];
                        if (!relators_hold(2, images))
                            continue;
                        out.found.push_back({from_columns(cols, p), d});
                    }
                }
            }
        },
        nvec - 1);

    LiftSearchResult res;
    res.p = p;
    res.r = r;
    res.s = s;
    res.filter = filter;
    for (auto& c : chunks) {
        res.pairs_examined += c.pairs;
        res.matrices_examined += c.matrices;
        for (auto& m : c.found) {
            res.det_residues.insert(m.det);
            res.candidates.push_back(std::move(m));
        }
    }
    return res;
}

bool lift_passes(const DhFamily& family, std::int64_t r, std::int64_t s, const FrattiniMatrix& a)
{
    const FiniteGroup& target = family.group(s);
    std::vector<Id> images;
    for (std::size_t j = 0; j < 3; ++j)
        images.push_back(monomial(target, column(a, j)));
    return preserves_relations(family.group(r), target, images);
}

LiftGroupReport lift_group_check(const LiftSearchResult& res)
{
    LiftGroupReport rep;
    const auto& c = res.candidates;
    rep.order = c.size();
    std::uint64_t n = rep.order;
    while (n > 1 && n % static_cast<std::uint64_t>(res.p) == 0)
        n /= static_cast<std::uint64_t>(res.p);
    rep.p_power = rep.order > 0 && n == 1;

    std::vector<std::vector<std::int64_t>> sorted;
    for (const auto& m : c)
        sorted.push_back(m.a.a);
    std::sort(sorted.begin(), sorted.end());
    auto member = [&](const FrattiniMatrix& m) { return std::binary_search(sorted.begin(), sorted.end(), m.a); };

    FrattiniMatrix id{res.p, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}};
    rep.closed = member(id);
    rep.det_multiplicative = true;
    for (const auto& a : c)
        for (const auto& b : c) {
            auto ab = a.a * b.a;
            rep.closed &= member(ab);
            rep.det_multiplicative &= ab.det() == mod(a.det * b.det, res.p);
        }
    rep.inverses = true;
    for (const auto& a : c) {
        bool found = false;
        for (const auto& b : c)
            if (a.a * b.a == id) {
                found = true;
                break;
            }
        rep.inverses &= found;
    }
    rep.all_det_one = std::all_of(c.begin(), c.end(), [](const MatrixLiftCandidate& m) { return m.det == 1; });
    rep.contains_unitriangular = member(FrattiniMatrix{res.p, 3, {1, 1, 0, 0, 1, 1, 0, 0, 1}});
    rep.passed = rep.p_power && rep.closed && rep.inverses && rep.det_multiplicative;
    return rep;
}

CorrectionReport central_correction_check(const DhFamily& family, const LiftSearchResult& res, std::uint64_t trials,
                                          std::mt19937_64& rng)
{
    const std::int64_t p = family.prime();
    const FiniteQuotient& target = family.group(res.s).quotient();
    const RelatorSet& rel = family.group(res.r).quotient().relator_set();
    auto b = builtin_basis("F32");
    const long P = static_cast<long>(p);
    std::uniform_int_distribution<long> entry(0, P - 1), wide(-P * P, P * P), shift(-3, 3), coin(0, 1);
    std::uniform_int_distribution<std::size_t> pick(0, res.candidates.empty() ? 0 : res.candidates.size() - 1);

    CorrectionReport rep;
    rep.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        // half the draws from the passing set when there is one
        MatrixLiftCandidate cand;
        if (!res.candidates.empty() && coin(rng)) {
            cand = res.candidates[pick(rng)];
        } else {
            do {
                cand.a = FrattiniMatrix{p, 3, std::vector<std::int64_t>(9)};
                for (auto& e : cand.a.a)
                    e = entry(rng);
                cand.det = cand.a.det();
            } while (cand.det == 0);
        }
        bool group_verdict = lift_passes(family, res.r, res.s, cand.a);
        rep.passing_trials += group_verdict;
        auto images = cand.lift();
        for (auto& g : images)
            g = g * FreeNilElement(b, {P * shift(rng), P * shift(rng), P * shift(rng), wide(rng), wide(rng), wide(rng)});
        bool free_verdict = maps_relators_into(rel, target, images);
        rep.agreements += free_verdict == group_verdict;
    }
    rep.passed = rep.agreements == rep.trials;
    return rep;
}

std::optional<IntMatrix> integer_lift(const FrattiniMatrix& a)
{
    const std::int64_t p = a.p;
    const std::size_t n = a.n;
    for (long bound = 0; bound <= 2; ++bound) {
        const long width = 2 * bound + 1;
        long total = 1;
        for (std::size_t i = 0; i < n * n; ++i)
            total *= width;
        for (long code = 0; code < total; ++code) {
            IntMatrix m(n);
            long c = code;
            for (std::size_t i = 0; i < n * n; ++i) {
                long t = c % width - bound;
                c /= width;
                std::int64_t e = a.a[i];
                if (2 * e > p)
                    e -= p; // centered representative
                m(i / n, i % n) = Integer(static_cast<long>(e + p * t));
            }
            Integer d = m.determinant();
            if (d == 1 || d == -1)
                return m;
        }
    }
    return std::nullopt;
}

bool DhOrbitCertificate::sound() const
{
    if (!certified)
        return true;
    if (contradiction)
        return false;
    return decision ? witness.has_value() && free_forward && free_backward : unimodular_lifts == 0;
}

DhOrbitCertificate dh_orbit_decision(const DhFamily& family, std::int64_t r, std::int64_t s, unsigned threads)
{
    const std::int64_t p = family.prime();
    DhOrbitCertificate cert;
    cert.p = p;
    cert.r = r;
    cert.s = s;
    cert.decision = orbit_decision(p, r, s);
    if (p != 5 && p != 7)
        return cert;
    cert.certified = true;
    auto res = matrix_lift_search(family, r, s, DetFilter::unimodular, threads);
    cert.unimodular_lifts = res.candidates.size();
    if (!res.candidates.empty()) {
        const MatrixLiftCandidate* pick = &res.candidates.front();
        FrattiniMatrix id{p, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}};
        for (const auto& c : res.candidates)
            if (c.a == id)
                pick = &c;
        cert.witness = *pick;
        cert.integer_witness = integer_lift(pick->a);
        if (cert.integer_witness) {
            auto b = builtin_basis("F32");
            std::vector<FreeNilElement> alpha;
            for (std::size_t j = 0; j < 3; ++j) {
                FreeNilElement g(b);
                for (std::size_t i = 0; i < 3; ++i)
                    g = g * FreeNilElement::symbol(b, i, (*cert.integer_witness)(i, j));
                alpha.push_back(g);
            }
            const auto& gr = family.group(r).quotient();
            const auto& gs = family.group(s).quotient();
            cert.free_forward = maps_relators_into(gr.relator_set(), gs, alpha);
            auto inv = invert_endomorphism(alpha);
            if (inv)
                cert.free_backward = maps_relators_into(gs.relator_set(), gr, *inv);
        }
    }
    cert.contradiction = cert.decision != (cert.unimodular_lifts > 0);
    return cert;
}

CharacteristicReport characteristic_check(const DhFamily& family, const LiftSearchResult& lift11)
{
    if (lift11.r != 1 || lift11.s != 1 || lift11.filter != DetFilter::all)
        throw std::invalid_argument("characteristic_check needs the unfiltered (1, 1) lift search");
    const FiniteGroup& g = family.group(1);
    const std::int64_t p = family.prime();
    CharacteristicReport rep;
    rep.p = p;
    rep.lift_group_order = lift11.candidates.size();

    Subgroup derived = subgroup_functors(g).derived;
    Id x = g.generator(0), y = g.generator(1);
    auto with = [&](std::vector<Id> extra) {
        auto gens = derived.generators;
        gens.insert(gens.end(), extra.begin(), extra.end());
        return subgroup_closure(g, gens);
    };
    struct Target {
        std::string name;
        Subgroup h;
        bool expect;
    };
    std::vector<Target> targets{{"<G',x>", with({x}), true},
                                {"<G',x,y>", with({x, y}), true},
                                {"<G',y>", with({y}), false},
                                {"G", with(g.generators()), true}};

    auto preserves = [&](const std::vector<Id>& images, const Subgroup& h) {
        Homomorphism phi{&g, &g, images};
        for (Id a : h.generators)
            if (!h.contains(phi.apply(a)))
                return false;
        return true;
    };

    std::vector<std::vector<Id>> lifts;
    for (const auto& c : lift11.candidates) {
        std::vector<Id> images;
        for (std::size_t j = 0; j < 3; ++j)
            images.push_back(monomial(g, column(c.a, j)));
        lifts.push_back(std::move(images));
    }
    // x_i -> x_i c for c running over generators of G' = Z(G)
    std::vector<std::vector<Id>> central;
    rep.central_generators_verified = true;
    for (std::size_t i = 0; i < 3; ++i)
        for (Id c : derived.generators) {
            auto images = g.generators();
            images[i] = g.mul(images[i], c);
            Homomorphism phi{&g, &g, images};
            rep.central_generators_verified &= preserves_relations(g, g, images) && is_bijective(phi);
            central.push_back(std::move(images));
        }
    rep.central_generators = central.size();

    rep.passed = rep.central_generators_verified && !lifts.empty();
    for (const auto& t : targets) {
        SubgroupVerdict v;
        v.name = t.name;
        v.order = t.h.order();
        v.expect_characteristic = t.expect;
        for (const auto& im : lifts)
            (preserves(im, t.h) ? v.preserved_by : v.moved_by)++;
        for (const auto& im : central)
            (preserves(im, t.h) ? v.central_preserved_by : v.central_moved_by)++;
        v.passed = t.expect ? v.moved_by == 0 && v.central_moved_by == 0 : v.moved_by > 0;
        rep.passed &= v.passed;
        rep.subgroups.push_back(std::move(v));
    }
    return rep;
}

} // namespace nilforge
