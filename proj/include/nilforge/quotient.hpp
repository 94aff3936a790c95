#pragma once

#include "nilforge/collector.hpp"
#include "nilforge/element.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nilforge {

enum class RelatorKind {
    N_r,    // F23: x^{p^2}, y^p, x^{-rp}[y,x,x], [y,x,y]
    K,      // F23: x^{p^2}, y^p, [y,x,y]
    M,      // F23: x^p, y
    DH_M_r, // F32: (F')^p, generator p^2-th powers, x^{rp}[y,x], y^{rp}[z,x], z^{rp}[z,x]^-1[z,y]
};

std::string_view kind_name(RelatorKind kind);

/// Generators of a normal subgroup, given by normal-form elements of the ambient group.
struct RelatorSet {
    BasisPtr basis;
    std::vector<FreeNilElement> relators;
    std::string label;
    // The prime p for p-group quotients, 0 if not known.
    std::int64_t prime = 0;
};

RelatorSet standard_relators(RelatorKind kind, std::int64_t p, std::int64_t r = 1);

/// Canonical representative of a coset: each exponent lies in [0, modulus).
struct PcElement {
    Exponents<std::int64_t> exps{};

    friend bool operator==(const PcElement&, const PcElement&) = default;
    friend auto operator<=>(const PcElement&, const PcElement&) = default;
};

class InfiniteIndexError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A finite quotient F/N of a free nilpotent group.
///
/// N is stored by an induced polycyclic sequence: for each basis symbol k an
/// element rule(k) of N whose first nonzero exponent sits at k and equals
/// modulus(k) > 0. Reducing a word means multiplying on the right by powers
/// of rule(k), k ascending, until every exponent lies in [0, modulus(k)).
/// A modulus of 1 means the symbol is eliminated.
class FiniteQuotient {
public:
    /// Builds a quotient from stored data; only the shape of the rules is
    /// checked here, consistency_check() validates the group structure.
    static FiniteQuotient from_rules(RelatorSet relators, std::vector<std::int64_t> moduli,
                                     std::vector<Exponents<std::int64_t>> rules);

    const RelatorSet& relator_set() const { return rel_; }
    const NilpotentBasis& basis() const { return *rel_.basis; }
    const BasisPtr& basis_ptr() const { return rel_.basis; }
    const std::string& label() const { return rel_.label; }
    std::int64_t prime() const { return rel_.prime; }
    std::size_t symbol_count() const { return moduli_.size(); }
    std::size_t rank() const { return rel_.basis->rank(); }

    const std::vector<std::int64_t>& moduli() const { return moduli_; }
    const std::vector<Exponents<std::int64_t>>& rules() const { return rules_; }
    /// e.g. "x^5 -> [y,x,x]^3": the canonical form of g_k^{modulus}.
    std::string rule_string(std::size_t k) const;

    Integer order() const;
    /// Order as a machine integer; throws if it does not fit.
    std::int64_t size() const { return size_; }

    PcElement reduce(const FreeNilElement& a) const;
    /// Reduces a collected exponent vector with small entries.
    PcElement reduce(Exponents<std::int64_t> a) const;
    bool is_canonical(const PcElement& a) const;

    PcElement identity() const { return {}; }
    PcElement symbol(std::size_t s) const;
    PcElement generator(std::size_t i) const { return symbol(i); }

    PcElement mul(const PcElement& a, const PcElement& b) const;
    PcElement inv(const PcElement& a) const;
    PcElement pow(const PcElement& a, std::int64_t n) const;
    PcElement pow(const PcElement& a, const Integer& n) const;
    PcElement comm(const PcElement& a, const PcElement& b) const;
    PcElement conj(const PcElement& a, const PcElement& by) const; // by^-1 a by

    /// Mixed-radix index, first symbol most significant.
    std::int64_t index(const PcElement& a) const;
    PcElement element(std::int64_t index) const;

    FreeNilElement lift(const PcElement& a) const;
    std::string to_string(const PcElement& a) const;

    /// Random canonical representative.
    template <class Rng>
    PcElement random_element(Rng& rng) const
    {
        std::uniform_int_distribution<std::int64_t> d(0, size_ - 1);
        return element(d(rng));
    }

private:
    FiniteQuotient() = default;
    void finish();

    RelatorSet rel_;
    std::vector<std::int64_t> moduli_;
    std::vector<Exponents<std::int64_t>> rules_;
    std::vector<Exponents<std::int64_t>> rule_inverses_;
    std::vector<std::int64_t> radix_; // place value of each symbol in index()
    std::int64_t size_ = 0;
};

using QuotientPtr = std::shared_ptr<const FiniteQuotient>;

/// Computes an induced polycyclic sequence for the normal closure of the
/// relators. Throws InfiniteIndexError if some symbol receives no modulus.
FiniteQuotient make_quotient(const RelatorSet& rel);

bool membership(const FiniteQuotient& q, const FreeNilElement& a);

struct ConsistencyOptions {
    std::uint64_t seed = 1;
    // Multiplicativity is checked on all pairs when order^2 fits the budget.
    std::uint64_t budget_pairs = 1'000'000;
    std::uint64_t samples = 100'000;
    // Associativity is exhaustive up to this order (via a Cayley table).
    std::int64_t exhaustive_associativity_order = 625;
};

struct ConsistencyReport {
    bool passed = true;
    std::vector<std::string> failures; // first few diagnostics
    std::uint64_t failure_count = 0;
    bool order_matches = false;
    std::uint64_t representatives_checked = 0;
    bool representatives_exhaustive = false;
    std::uint64_t relator_checks = 0;
    std::uint64_t multiplicativity_pairs = 0;
    bool multiplicativity_exhaustive = false;
    std::uint64_t associativity_triples = 0;
    bool associativity_exhaustive = false;
};

ConsistencyReport consistency_check(const FiniteQuotient& q, const ConsistencyOptions& options = {});

/// Adapter for evaluate_word / symbol_images.
struct QuotientOps {
    using Element = PcElement;
    const FiniteQuotient* q;
    Element identity() const { return {}; }
    Element mul(const Element& a, const Element& b) const { return q->mul(a, b); }
    Element inv(const Element& a) const { return q->inv(a); }
    Element pow(const Element& a, const Integer& n) const { return q->pow(a, n); }
    Element pow(const Element& a, std::int64_t n) const { return q->pow(a, n); }
};

} // namespace nilforge
