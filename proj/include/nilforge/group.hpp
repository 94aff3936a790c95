#pragma once

#include "nilforge/evaluate.hpp"
#include "nilforge/quotient.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace nilforge {

// Element scans (functors, series, maximal subgroups) need the whole group in memory.
inline constexpr std::int64_t kMaxScanOrder = 200'000;
// Exhaustive isomorphism search bound.
inline constexpr std::int64_t kMaxSearchOrder = 10'000;
// A Cayley table is built for groups up to this order.
inline constexpr std::int64_t kMaxTableOrder = 4'096;

/// A finite quotient viewed as an abstract group on element ids
/// 0..order-1 (the mixed-radix index of the canonical representative;
/// id 0 is the identity, and id order matches exponent-vector order).
class FiniteGroup {
public:
    using Id = std::int32_t;

    explicit FiniteGroup(QuotientPtr q);

    const FiniteQuotient& quotient() const { return *q_; }
    const QuotientPtr& quotient_ptr() const { return q_; }
    std::int64_t order() const { return order_; }
    std::int64_t prime() const { return q_->prime(); }
    std::size_t rank() const { return q_->rank(); }
    bool has_table() const { return !table_.empty(); }

    static constexpr Id identity() { return 0; }
    Id id(const PcElement& a) const { return static_cast<Id>(q_->index(a)); }
    PcElement element(Id a) const { return q_->element(a); }
    Id generator(std::size_t i) const { return generators_.at(i); }
    const std::vector<Id>& generators() const { return generators_; }

    Id mul(Id a, Id b) const;
    Id inv(Id a) const { return inverse_[static_cast<std::size_t>(a)]; }
    Id pow(Id a, std::int64_t n) const;
    Id comm(Id a, Id b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }
    Id conj(Id a, Id by) const { return mul(mul(inv(by), a), by); }
    std::int64_t element_order(Id a) const;

    /// Dimension of the Frattini quotient G/G'G^p over F_p.
    std::size_t frattini_rank() const { return free_columns_.size(); }
    /// Coordinates of the image of a in G/G'G^p.
    std::vector<std::int64_t> frattini_coords(Id a) const;
    /// Generators whose images form a basis of the Frattini quotient.
    const std::vector<std::size_t>& frattini_basis_generators() const { return free_columns_; }

    std::string to_string(Id a) const { return q_->to_string(element(a)); }

private:
    void require_scan() const;

    QuotientPtr q_;
    std::int64_t order_;
    std::vector<Id> generators_;
    std::vector<Id> table_;
    std::vector<Id> inverse_;
    // Echelon basis (mod p) of the weight-1 parts of the relations.
    std::vector<std::vector<std::int64_t>> relation_rows_;
    std::vector<std::size_t> pivots_, free_columns_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

GroupPtr make_group(const RelatorSet& rel);

/// Adapter for evaluate_word / symbol_images on element ids.
struct GroupOps {
    using Element = FiniteGroup::Id;
    const FiniteGroup* g;
    Element identity() const { return 0; }
    Element mul(Element a, Element b) const { return g->mul(a, b); }
    Element inv(Element a) const { return g->inv(a); }
    Element pow(Element a, const Integer& n) const;
    Element pow(Element a, std::int64_t n) const { return g->pow(a, n); }
};

struct Subgroup {
    const FiniteGroup* parent = nullptr;
    std::vector<FiniteGroup::Id> generators;
    std::vector<FiniteGroup::Id> elements; // sorted

    std::int64_t order() const { return static_cast<std::int64_t>(elements.size()); }
    bool contains(FiniteGroup::Id a) const;
    bool is_abelian() const;
    bool is_normal() const;
    friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.elements == b.elements; }
};

Subgroup subgroup_closure(const FiniteGroup& g, std::vector<FiniteGroup::Id> gens);
Subgroup normal_closure(const FiniteGroup& g, std::vector<FiniteGroup::Id> gens);
/// Subgroup with the given element set, which must be closed; a small generating set is computed.
Subgroup subgroup_from_elements(const FiniteGroup& g, std::vector<FiniteGroup::Id> elements);

struct Functors {
    Subgroup center, derived, agemo;
};
Functors subgroup_functors(const FiniteGroup& g);

struct SeriesInvariants {
    std::int64_t order = 0;
    std::int64_t exponent = 0;
    int nilpotency_class = 0;
    std::vector<std::int64_t> lower_central_orders; // |gamma_1|, |gamma_2|, ..., 1
};
SeriesInvariants series_invariants(const FiniteGroup& g);

struct MaximalSubgroup {
    std::vector<std::int64_t> functional; // kernel of this functional on G/G'G^p
    Subgroup subgroup;
    bool abelian = false;
};
std::vector<MaximalSubgroup> maximal_subgroups(const FiniteGroup& g);

/// Square matrix over F_p (row-major).
struct FrattiniMatrix {
    std::int64_t p = 0;
    std::size_t n = 0;
    std::vector<std::int64_t> a;

    std::int64_t operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
    std::int64_t det() const;
    bool is_lower_triangular() const;
    FrattiniMatrix operator*(const FrattiniMatrix& o) const;
    friend bool operator==(const FrattiniMatrix&, const FrattiniMatrix&) = default;
    std::string to_string() const;
};

/// Homomorphism given by the images of the source's ambient generators.
struct Homomorphism {
    const FiniteGroup* source = nullptr;
    const FiniteGroup* target = nullptr;
    std::vector<FiniteGroup::Id> images;

    FiniteGroup::Id apply(FiniteGroup::Id a) const;
};

/// Whether the images satisfy every defining relator of the source.
bool preserves_relations(const FiniteGroup& source, const FiniteGroup& target,
                         const std::vector<FiniteGroup::Id>& images);
/// Throws std::invalid_argument when the relations are not preserved.
Homomorphism make_homomorphism(const FiniteGroup& source, const FiniteGroup& target,
                               std::vector<FiniteGroup::Id> images);
bool is_bijective(const Homomorphism& h);

FrattiniMatrix induced_frattini_matrix(const Homomorphism& h);

struct SearchOptions {
    unsigned threads = 0; // 0 = hardware concurrency
    std::optional<std::size_t> limit;
};

/// All isomorphisms G -> H in lexicographic order of the image tuples.
std::vector<Homomorphism> all_isomorphisms(const FiniteGroup& g, const FiniteGroup& h, const SearchOptions& opt = {});
bool is_isomorphic(const FiniteGroup& g, const FiniteGroup& h);
std::uint64_t automorphism_count(const FiniteGroup& g, const SearchOptions& opt = {});

/// Relator checks ordered by the last generator they involve, so partial
/// image tuples can be rejected early.
class RelatorSchedule {
public:
    explicit RelatorSchedule(const RelatorSet& rel);
    /// Relators whose generator support has largest index `depth`.
    const std::vector<std::size_t>& at_depth(std::size_t depth) const { return by_depth_[depth]; }
    const RelatorSet& relators() const { return *rel_; }

private:
    const RelatorSet* rel_;
    std::vector<std::vector<std::size_t>> by_depth_;
};

/// Evaluates relator `index` on generator images, all of which up to the
/// relator's depth must be set.
FiniteGroup::Id evaluate_relator(const FiniteGroup& target, const RelatorSet& rel, std::size_t index,
                                 const std::vector<FiniteGroup::Id>& images);

/// Runs body(begin, end, chunk) over contiguous chunks of [0, n) on worker
/// threads; chunk numbering follows index order so results can be merged
/// deterministically.
void parallel_chunks(std::size_t n, unsigned threads, const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                     std::size_t chunk_count);

} // namespace nilforge
