#pragma once

#include "nilforge/group.hpp"

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace nilforge {

/// Endomorphism of F23 given by psi(x) = x^i y^j c, psi(y) = y^k d.
struct PsiParams {
    std::int64_t p = 0;
    Integer i, j, k;
    FreeNilElement c{builtin_basis("F23")}, d{builtin_basis("F23")}; // in F'F^p

    /// i and k prime to p, and c, d with weight-1 exponents divisible by p.
    bool valid() const;
    std::vector<FreeNilElement> images() const;
    std::string to_string() const;
};

PsiParams identity_psi(std::int64_t p);

/// Bound on the random correction terms: weight-1 part p*[-bound, bound],
/// higher exponents in [0, p^2).
inline constexpr long kCorrectionBound = 3;

PsiParams random_psi(std::int64_t p, std::mt19937_64& rng);

struct CheckReport {
    bool passed = true;
    std::uint64_t checks = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what);
};

/// Verifies psi(x^{p^2}), psi(y^p), psi([y,x,y]) in K and
/// psi(x^{-rp}[y,x,x]) = x^{-irp}[y,x,x]^{i^2 k} mod K for every r.
CheckReport psi_congruence_suite(const FiniteQuotient& k_quotient, const PsiParams& params);

enum class Verdict { pass, fail, skipped };
std::string_view verdict_name(Verdict v);

struct PowerLemmaResult {
    Verdict verdict = Verdict::skipped;
    std::string reason; // why the hypotheses failed, for skipped results
};

/// (ab)^p = a^p when the class is below p and the normal closure of b is
/// abelian of exponent p. Both hypotheses are checked.
class PowerLemma {
public:
    explicit PowerLemma(const FiniteGroup& g);
    PowerLemmaResult check(FiniteGroup::Id a, FiniteGroup::Id b) const;
    int group_class() const { return class_; }

private:
    const FiniteGroup& g_;
    int class_;
};

/// The proof's criterion: i k s = r (mod p).
bool membership_criterion(std::int64_t p, std::int64_t r, std::int64_t s, const PsiParams& params);
/// Ground truth: every relator of N_r maps into N_s.
bool maps_relators_into(const RelatorSet& source, const FiniteQuotient& target,
                        std::span<const FreeNilElement> images);

struct LiftResult {
    bool formula = false;    // i k = +-1
    bool surjective = false; // induced map on F/F' has determinant +-1
    std::optional<std::vector<FreeNilElement>> inverse;
    bool inverse_verified = false; // psi o psi' and psi' o psi fix x and y
};

/// Whether psi is an automorphism of F; c and d are expected in F' here.
LiftResult lifts_to_aut(const PsiParams& params);
/// Inverse of an endomorphism of F23 or F32 whose abelianization is
/// unimodular, or nullopt when the determinant is not +-1.
std::optional<std::vector<FreeNilElement>> invert_endomorphism(std::span<const FreeNilElement> images);

bool orbit_decision(std::int64_t p, std::int64_t r, std::int64_t s);

/// All quotients F/N_r for one prime, with F/K.
struct NrFamily {
    std::int64_t p = 0;
    QuotientPtr k;
    std::vector<GroupPtr> groups; // groups[r - 1] = F/N_r

    const FiniteGroup& group(std::int64_t r) const { return *groups.at(static_cast<std::size_t>(r - 1)); }
};
NrFamily make_nr_family(std::int64_t p);

struct OrbitCertificate {
    std::int64_t p = 0, r = 0, s = 0;
    bool equivalent = false;
    std::string witness_name;
    std::vector<FreeNilElement> witness;
    bool forward_verified = false;  // witness maps N_r into N_s
    bool backward_verified = false; // its inverse maps N_s into N_r
    bool witness_is_automorphism = false;
    // Exhaustive branch.
    bool scanned = false;
    std::uint64_t isomorphisms_examined = 0;
    std::set<std::int64_t> det_residues;
    bool all_lower_triangular = false;
    bool contradiction = false; // an isomorphism with det +-1 for r != +-s

    bool sound() const;
};

OrbitCertificate orbit_witness(const NrFamily& family, std::int64_t r, std::int64_t s, const SearchOptions& opt = {});

struct AbelianMaximalReport {
    std::int64_t p = 0;
    std::uint64_t maximal = 0, abelian = 0;
    std::int64_t abelian_order = 0;
    bool relators_in_m = false; // N is contained in M = <x^p, y>^F
    bool preimage_is_m = false; // the abelian one is exactly the image of M
    bool passed = false;
};

/// p+1 maximal subgroups, exactly one abelian, and that one is M/N.
/// Membership in M is decided in F/M, independently of the subgroup scan.
AbelianMaximalReport abelian_maximal_check(const FiniteGroup& g);

/// Orbit classes of {1..p-1} under r ~ s iff r = +-s (mod p).
std::vector<std::vector<std::int64_t>> orbit_classes(std::int64_t p);

} // namespace nilforge
