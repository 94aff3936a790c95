#pragma once

#include "nilforge/basis.hpp"
#include "nilforge/integer.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nilforge {

class FreeNilElement;
struct GroupWord;

/// Element of the truncated free associative ring Z<X_1..X_rank> / (degree > degree()).
///
/// Coefficients are stored densely, monomials in length-lexicographic order
/// on letter indices: 1, X_1, .., X_r, X_1X_1, X_1X_2, ...
class TruncatedSeries {
public:
    TruncatedSeries(std::size_t rank, int degree);

    static TruncatedSeries one(std::size_t rank, int degree);
    // 1 + X_i
    static TruncatedSeries generator(std::size_t rank, int degree, std::size_t i);

    std::size_t rank() const { return rank_; }
    int degree() const { return degree_; }
    std::size_t size() const { return coeffs_.size(); }

    // Monomial given as a sequence of letter indices (empty = constant term).
    const Integer& coefficient(std::span<const std::size_t> monomial) const;
    Integer& coefficient(std::span<const std::size_t> monomial);
    const Integer& at(std::size_t index) const { return coeffs_[index]; }
    std::size_t index_of(std::span<const std::size_t> monomial) const;

    TruncatedSeries operator*(const TruncatedSeries& other) const;
    TruncatedSeries operator-(const TruncatedSeries& other) const;
    bool operator==(const TruncatedSeries& other) const = default;

    /// (1 + A)^n for any integer n via the binomial series; requires constant term 1.
    TruncatedSeries power(const Integer& n) const;
    TruncatedSeries inverse() const { return power(-1); }

    std::string to_string(std::span<const std::string> letter_names) const;

private:
    std::size_t offset(int d) const { return offsets_[static_cast<std::size_t>(d)]; }

    std::size_t rank_;
    int degree_;
    std::vector<std::size_t> offsets_; // offsets_[d] = index of the first degree-d monomial
    std::vector<Integer> coeffs_;
};

TruncatedSeries series_multiply(const TruncatedSeries& a, const TruncatedSeries& b);

/// Image of basis symbol s: generators go to 1 + X_i, brackets to the ring
/// commutator A^-1 B^-1 A B of their parts. Never consults the collector rules.
TruncatedSeries symbol_series(const NilpotentBasis& basis, std::size_t s);

/// Truncated Magnus embedding of a normal form; injective for class <= 3.
TruncatedSeries magnus_embed(const FreeNilElement& a);

/// Product of the letter series of an uncollected word.
TruncatedSeries word_series(const NilpotentBasis& basis, const GroupWord& w);

/// Throws std::logic_error when a stored conjugation rule disagrees with the
/// series computation of the same conjugate.
void verify_rules_against_series(const NilpotentBasis& basis);

} // namespace nilforge
