#include "nilforge/orbit.hpp"

#include <sstream>

namespace nilforge {

namespace {

BasisPtr f23() { return builtin_basis("F23"); }

FreeNilElement x_power(const Integer& n) { return FreeNilElement::symbol(f23(), 0, n); }

bool unit_mod(const Integer& a, std::int64_t p)
{
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(p));
    return r != 0;
}

std::int64_t residue(const Integer& a, std::int64_t p)
{
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(p));
    return r.get_si();
}

} // namespace

bool PsiParams::valid() const
{
    if (!unit_mod(i, p) || !unit_mod(k, p))
        return false;
    for (const auto* e : {&c, &d})
        for (std::size_t s = 0; s < e->basis().rank(); ++s)
            if (residue((*e)[s], p) != 0)
                return false;
    return true;
}

std::vector<FreeNilElement> PsiParams::images() const
{
    auto b = c.basis_ptr();
    FreeNilElement x = FreeNilElement::symbol(b, 0, i) * FreeNilElement::symbol(b, 1, j) * c;
    FreeNilElement y = FreeNilElement::symbol(b, 1, k) * d;
    return {x, y};
}

std::string PsiParams::to_string() const
{
    std::ostringstream os;
    os << "i=" << i << " j=" << j << " k=" << k << " c=" << c.to_string() << " d=" << d.to_string();
    return os.str();
}

PsiParams identity_psi(std::int64_t p)
{
    return {p, 1, 0, 1, FreeNilElement(f23()), FreeNilElement(f23())};
}

PsiParams random_psi(std::int64_t p, std::mt19937_64& rng)
{
    const long P = static_cast<long>(p);
    std::uniform_int_distribution<long> wide(0, P * P - 1), narrow(0, P - 1), unit(1, P - 1),
        corr(-kCorrectionBound, kCorrectionBound);
    auto correction = [&] {
        return FreeNilElement(f23(), {P * corr(rng), P * corr(rng), wide(rng), wide(rng), wide(rng)});
    };
    long i = wide(rng);
    while (i % P == 0)
        i = wide(rng);
    PsiParams params{p, i, narrow(rng), unit(rng), correction(), correction()};
    return params;
}

void CheckReport::expect(bool ok, const std::string& what)
{
    ++checks;
    if (ok)
        return;
    passed = false;
    if (failures.size() < 8)
        failures.push_back(what);
}

CheckReport psi_congruence_suite(const FiniteQuotient& kq, const PsiParams& params)
{
    CheckReport rep;
    auto b = kq.basis_ptr();
    const std::int64_t p = params.p;
    const long P = static_cast<long>(p);
    auto im = params.images();
    auto in_k = [&](const FreeNilElement& a) { return membership(kq, apply_endo(im, a)); };
    const std::string tag = " [" + params.to_string() + "]";
    rep.expect(in_k(FreeNilElement(b, {P * P, 0, 0, 0, 0})), "psi(x^{p^2}) not in K" + tag);
    rep.expect(in_k(FreeNilElement(b, {0, P, 0, 0, 0})), "psi(y^p) not in K" + tag);
    rep.expect(in_k(FreeNilElement(b, {0, 0, 0, 0, 1})), "psi([y,x,y]) not in K" + tag);
    for (long r = 1; r < P; ++r) {
        FreeNilElement image = apply_endo(im, FreeNilElement(b, {-r * P, 0, 0, 1, 0}));
        Integer i = params.i, k = params.k;
        FreeNilElement expected = x_power(-i * r * P) * FreeNilElement::symbol(b, 3, i * i * k);
        rep.expect(kq.reduce(image) == kq.reduce(expected),
                   "psi(x^{-rp}[y,x,x]) differs from x^{-irp}[y,x,x]^{i^2k} mod K at r=" + std::to_string(r) + tag);
    }
    return rep;
}

std::string_view verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::pass:
        return "pass";
    case Verdict::fail:
        return "fail";
    case Verdict::skipped:
        return "skipped";
    }
    return "?";
}

PowerLemma::PowerLemma(const FiniteGroup& g) : g_(g), class_(series_invariants(g).nilpotency_class) {}

PowerLemmaResult PowerLemma::check(FiniteGroup::Id a, FiniteGroup::Id b) const
{
    const std::int64_t p = g_.prime();
    if (class_ < 0 || class_ >= p)
        return {Verdict::skipped, "class " + std::to_string(class_) + " is not less than p"};
    Subgroup nc = normal_closure(g_, {b});
    if (!nc.is_abelian())
        return {Verdict::skipped, "normal closure of b is not abelian"};
    for (auto h : nc.generators)
        if (g_.pow(h, p) != 0)
            return {Verdict::skipped, "normal closure of b does not have exponent p"};
    bool ok = g_.pow(g_.mul(a, b), p) == g_.pow(a, p);
    return {ok ? Verdict::pass : Verdict::fail, ""};
}

bool membership_criterion(std::int64_t p, std::int64_t r, std::int64_t s, const PsiParams& params)
{
    Integer v = params.i * params.k * s - r;
    return residue(v, p) == 0;
}

bool maps_relators_into(const RelatorSet& source, const FiniteQuotient& target, std::span<const FreeNilElement> images)
{
    for (const auto& rel : source.relators)
        if (!membership(target, apply_endo(images, rel)))
            return false;
    return true;
}

std::optional<std::vector<FreeNilElement>> invert_endomorphism(std::span<const FreeNilElement> images)
{
    if (images.empty())
        throw std::invalid_argument("no images");
    auto b = images[0].basis_ptr();
    const std::size_t n = b->rank();
    IntMatrix a = abelianization_matrix(images);
    Integer det = a.determinant();
    if (det != 1 && det != -1)
        return std::nullopt;
    // Integer inverse through the adjugate.
    IntMatrix inv(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            IntMatrix minor(n - 1);
            for (std::size_t r = 0, mr = 0; r < n; ++r) {
                if (r == j)
                    continue;
                for (std::size_t c = 0, mc = 0; c < n; ++c) {
                    if (c == i)
                        continue;
                    minor(mr, mc++) = a(r, c);
                }
                ++mr;
            }
            Integer cof = ((i + j) % 2 ? -1 : 1) * minor.determinant();
            inv(i, j) = cof * det; // det = +-1, so 1/det = det
        }
    // xi0 realizes the inverse on F/F'; theta = psi o xi0 is then the
    // identity on F/F' and is inverted layer by layer.
    std::vector<FreeNilElement> xi0;
    for (std::size_t j = 0; j < n; ++j) {
        FreeNilElement g(b);
        for (std::size_t i = 0; i < n; ++i)
            g = g * FreeNilElement::symbol(b, i, inv(i, j));
        xi0.push_back(g);
    }
    std::vector<FreeNilElement> theta;
    for (const auto& g : xi0)
        theta.push_back(apply_endo(images, g));
    std::vector<FreeNilElement> out;
    for (std::size_t j = 0; j < n; ++j) {
        FreeNilElement g = FreeNilElement::symbol(b, j), h = g;
        for (int step = 0; step <= b->nilpotency_class(); ++step) {
            FreeNilElement u = inverse(g) * apply_endo(theta, h);
            if (u.is_identity())
                break;
            h = h * inverse(u);
        }
        if (apply_endo(theta, h) != g)
            return std::nullopt;
        out.push_back(apply_endo(xi0, h));
    }
    return out;
}

LiftResult lifts_to_aut(const PsiParams& params)
{
    LiftResult res;
    Integer ik = params.i * params.k;
    res.formula = ik == 1 || ik == -1;
    auto im = params.images();
    Integer det = abelianization_matrix(im).determinant();
    res.surjective = det == 1 || det == -1;
    if (!res.surjective)
        return res;
    res.inverse = invert_endomorphism(im);
    if (!res.inverse)
        return res;
    bool ok = true;
    auto b = im[0].basis_ptr();
    for (std::size_t g = 0; g < b->rank(); ++g) {
        auto gen = FreeNilElement::symbol(b, g);
        ok &= apply_endo(im, (*res.inverse)[g]) == gen;
        ok &= apply_endo(*res.inverse, im[g]) == gen;
    }
    res.inverse_verified = ok;
    return res;
}

bool orbit_decision(std::int64_t p, std::int64_t r, std::int64_t s)
{
    return mod(r - s, p) == 0 || mod(r + s, p) == 0;
}

NrFamily make_nr_family(std::int64_t p)
{
    NrFamily f;
    f.p = p;
    f.k = std::make_shared<FiniteQuotient>(make_quotient(standard_relators(RelatorKind::K, p)));
    for (std::int64_t r = 1; r < p; ++r)
        f.groups.push_back(make_group(standard_relators(RelatorKind::N_r, p, r)));
    return f;
}

bool OrbitCertificate::sound() const
{
    if (equivalent)
        return forward_verified && backward_verified && witness_is_automorphism;
    return scanned && isomorphisms_examined > 0 && !contradiction;
}

OrbitCertificate orbit_witness(const NrFamily& family, std::int64_t r, std::int64_t s, const SearchOptions& opt)
{
    const std::int64_t p = family.p;
    OrbitCertificate cert;
    cert.p = p;
    cert.r = r;
    cert.s = s;
    cert.equivalent = orbit_decision(p, r, s);
    const FiniteGroup& gr = family.group(r);
    const FiniteGroup& gs = family.group(s);
    if (cert.equivalent) {
        auto b = f23();
        auto x = FreeNilElement::symbol(b, 0), y = FreeNilElement::symbol(b, 1);
        if (mod(r - s, p) == 0) {
            cert.witness_name = "x->x, y->y";
            cert.witness = {x, y};
        } else {
            cert.witness_name = "x->x, y->y^-1";
            cert.witness = {x, inverse(y)};
        }
        cert.forward_verified = maps_relators_into(gr.quotient().relator_set(), gs.quotient(), cert.witness);
        auto inv = invert_endomorphism(cert.witness);
        if (inv) {
            cert.backward_verified = maps_relators_into(gs.quotient().relator_set(), gr.quotient(), *inv);
            bool id = true;
            for (std::size_t g = 0; g < 2; ++g) {
                auto gen = FreeNilElement::symbol(b, g);
                id &= apply_endo(cert.witness, (*inv)[g]) == gen && apply_endo(*inv, cert.witness[g]) == gen;
            }
            cert.witness_is_automorphism = id;
        }
        return cert;
    }
    cert.scanned = true;
    cert.all_lower_triangular = true;
    for (const auto& h : all_isomorphisms(gr, gs, opt)) {
        ++cert.isomorphisms_examined;
        auto m = induced_frattini_matrix(h);
        cert.det_residues.insert(m.det());
        cert.all_lower_triangular &= m.is_lower_triangular();
    }
    cert.contradiction = cert.det_residues.count(1) > 0 || cert.det_residues.count(p - 1) > 0;
    return cert;
}

AbelianMaximalReport abelian_maximal_check(const FiniteGroup& g)
{
    AbelianMaximalReport rep;
    rep.p = g.prime();
    auto ms = maximal_subgroups(g);
    rep.maximal = ms.size();
    const MaximalSubgroup* ab = nullptr;
    for (const auto& m : ms)
        if (m.abelian) {
            ++rep.abelian;
            ab = &m;
        }
    FiniteQuotient fm = make_quotient(standard_relators(RelatorKind::M, rep.p));
    const FiniteQuotient& q = g.quotient();
    rep.relators_in_m = true;
    for (const auto& rel : q.relator_set().relators)
        rep.relators_in_m &= membership(fm, rel);
    if (ab && rep.relators_in_m) {
        rep.abelian_order = ab->subgroup.order();
        std::vector<FiniteGroup::Id> image;
        for (FiniteGroup::Id a = 0; a < g.order(); ++a)
            if (membership(fm, q.lift(g.element(a))))
                image.push_back(a);
        rep.preimage_is_m = image == ab->subgroup.elements;
    }
    rep.passed = rep.maximal == static_cast<std::uint64_t>(rep.p + 1) && rep.abelian == 1 && rep.preimage_is_m;
    return rep;
}

std::vector<std::vector<std::int64_t>> orbit_classes(std::int64_t p)
{
    std::vector<std::vector<std::int64_t>> classes;
    for (std::int64_t r = 1; r < p; ++r) {
        bool placed = false;
        for (auto& c : classes)
            if (orbit_decision(p, c.front(), r)) {
                c.push_back(r);
                placed = true;
                break;
            }
        if (!placed)
            classes.push_back({r});
    }
    return classes;
}

} // namespace nilforge
