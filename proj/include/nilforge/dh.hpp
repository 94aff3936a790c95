#pragma once

#include "nilforge/orbit.hpp"

#include <mutex>

namespace nilforge {

/// The groups F32/M_r, r = 1..p-1, built on first use.
class DhFamily {
public:
    explicit DhFamily(std::int64_t p);

    std::int64_t prime() const { return p_; }
    const FiniteGroup& group(std::int64_t r) const { return *group_ptr(r); }
    GroupPtr group_ptr(std::int64_t r) const;

private:
    std::int64_t p_;
    mutable std::mutex mutex_;
    mutable std::vector<GroupPtr> groups_;
};

struct StructureReport {
    std::int64_t p = 0, r = 0;
    std::int64_t order = 0;
    std::int64_t center_order = 0, derived_order = 0, agemo_order = 0;
    bool functors_equal = false;
    bool passed = false; // order p^6, Z = G' = G^p of order p^3
};

StructureReport verify_structure(const DhFamily& family, std::int64_t r);

struct ScalingReport {
    std::int64_t p = 0, r = 0;
    Homomorphism map; // F/M_r -> F/M_1, generators to their r-th powers
    bool well_defined = false;
    bool bijective = false;
    FrattiniMatrix matrix;
    std::int64_t det = 0;
    bool passed = false;
};

ScalingReport scaling_isomorphism(const DhFamily& family, std::int64_t r);

/// r^3 is not +-1 mod p.
bool cubic_condition(std::int64_t p, std::int64_t r);
std::optional<std::int64_t> find_valid_r(std::int64_t p);

enum class DetFilter { all, unimodular };
std::string_view det_filter_name(DetFilter f);

/// Largest prime for which matrix searches run.
inline constexpr std::int64_t kMaxLiftPrime = 7;

struct MatrixLiftCandidate {
    FrattiniMatrix a; // column j holds the exponents of the image of generator j
    std::int64_t det = 0;

    /// The monomials x^{a_1j} y^{a_2j} z^{a_3j} with exponents in [0, p).
    std::vector<FreeNilElement> lift() const;
};

struct LiftSearchResult {
    std::int64_t p = 0, r = 0, s = 0;
    DetFilter filter = DetFilter::all;
    std::uint64_t pairs_examined = 0;    // independent first two columns
    std::uint64_t matrices_examined = 0; // full matrices reaching the last relator check
    std::vector<MatrixLiftCandidate> candidates;
    std::set<std::int64_t> det_residues;
};

/// Invertible A over F_p whose monomial lift maps every relator of M_r into
/// M_s. Enumeration is column by column with relators checked as soon as
/// the generators they involve have images.
LiftSearchResult matrix_lift_search(const DhFamily& family, std::int64_t r, std::int64_t s, DetFilter filter,
                                    unsigned threads = 0);

/// Group-level verdict for one matrix: every relator of M_r evaluates
/// trivially on the monomial images in F/M_s.
bool lift_passes(const DhFamily& family, std::int64_t r, std::int64_t s, const FrattiniMatrix& a);

struct LiftGroupReport {
    std::uint64_t order = 0;
    bool p_power = false;
    bool closed = false;
    bool inverses = false;
    bool det_multiplicative = false;
    bool all_det_one = false;
    bool contains_unitriangular = false; // x -> x, y -> xy, z -> yz
    bool passed = false;
};

/// Checks that the candidates of an r = s search form a group.
LiftGroupReport lift_group_check(const LiftSearchResult& res);

struct CorrectionReport {
    std::uint64_t trials = 0;
    std::uint64_t passing_trials = 0; // trials whose monomial lift passes
    std::uint64_t agreements = 0;
    bool passed = false;
};

/// Multiplies the monomial images by random elements of F'F^p and compares
/// the free-level membership verdict with the group-level one.
CorrectionReport central_correction_check(const DhFamily& family, const LiftSearchResult& res,
                                          std::uint64_t trials, std::mt19937_64& rng);

/// Integer matrix with determinant +-1 congruent to A mod p, found by
/// searching A + pT over small T.
std::optional<IntMatrix> integer_lift(const FrattiniMatrix& a);

struct DhOrbitCertificate {
    std::int64_t p = 0, r = 0, s = 0;
    bool decision = false; // r = +-s (mod p)
    bool certified = false;
    std::uint64_t unimodular_lifts = 0;
    std::optional<MatrixLiftCandidate> witness;
    // Free-level check of a unimodular witness: an integer lift B with
    // det B = +-1 whose monomial endomorphism alpha has alpha(M_r) in M_s and
    // alpha^{-1}(M_s) in M_r.
    std::optional<IntMatrix> integer_witness;
    bool free_forward = false, free_backward = false;
    bool contradiction = false; // search disagrees with the decision

    bool sound() const;
};

DhOrbitCertificate dh_orbit_decision(const DhFamily& family, std::int64_t r, std::int64_t s, unsigned threads = 0);

struct SubgroupVerdict {
    std::string name;
    std::int64_t order = 0;
    bool expect_characteristic = false;
    std::uint64_t preserved_by = 0, moved_by = 0; // lift group members
    std::uint64_t central_preserved_by = 0, central_moved_by = 0;
    bool passed = false;
};

struct CharacteristicReport {
    std::int64_t p = 0;
    std::uint64_t lift_group_order = 0;
    std::uint64_t central_generators = 0; // x_i -> x_i c, c a generator of G'
    bool central_generators_verified = false;
    std::vector<SubgroupVerdict> subgroups; // <G',x>, <G',x,y>, <G',y>, G
    bool passed = false;
};

/// Invariance of <G',x> and <G',x,y> in F/M_1 under the lift group of
/// (1, 1) and the generating central automorphisms; <G',y> is a negative
/// control expected to move.
CharacteristicReport characteristic_check(const DhFamily& family, const LiftSearchResult& lift11);

} // namespace nilforge
