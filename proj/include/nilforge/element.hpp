#pragma once

#include "nilforge/basis.hpp"
#include "nilforge/collector.hpp"
#include "nilforge/int_matrix.hpp"
#include "nilforge/integer.hpp"

#include <span>
#include <string>
#include <vector>

namespace nilforge {

struct WordLetter {
    std::size_t symbol;
    Integer exponent;
};

/// A finite product of basis-symbol powers, not necessarily collected.
struct GroupWord {
    std::vector<WordLetter> letters;
};

/// Element of a free nilpotent group in Hall normal form
/// g_1^{e_1} g_2^{e_2} ... g_n^{e_n}.
class FreeNilElement {
public:
    explicit FreeNilElement(BasisPtr basis);
    FreeNilElement(BasisPtr basis, std::span<const Integer> exponents);
    FreeNilElement(BasisPtr basis, std::initializer_list<long> exponents);
    FreeNilElement(BasisPtr basis, const Exponents<Integer>& exponents);

    static FreeNilElement symbol(BasisPtr basis, std::size_t s, const Integer& n = 1);

    const NilpotentBasis& basis() const { return *basis_; }
    const BasisPtr& basis_ptr() const { return basis_; }
    std::size_t size() const { return basis_->size(); }

    const Integer& operator[](std::size_t s) const { return exps_[s]; }
    const Exponents<Integer>& exponents() const { return exps_; }
    std::vector<Integer> exponent_vector() const;

    bool is_identity() const;
    /// One letter per nonzero exponent, in basis order.
    GroupWord to_word() const;
    /// e.g. "x^1 y^1 [y,x]^1"; the identity prints as "1".
    std::string to_string() const;

    friend bool operator==(const FreeNilElement& a, const FreeNilElement& b);

private:
    BasisPtr basis_;
    Exponents<Integer> exps_{};
};

FreeNilElement collect(const BasisPtr& basis, const GroupWord& word);

FreeNilElement multiply(const FreeNilElement& a, const FreeNilElement& b);
FreeNilElement inverse(const FreeNilElement& a);
FreeNilElement power(const FreeNilElement& a, const Integer& n);
// [a,b] = a^-1 b^-1 a b
FreeNilElement commutator(const FreeNilElement& a, const FreeNilElement& b);
FreeNilElement conjugate(const FreeNilElement& a, const FreeNilElement& by); // by^-1 a by

inline FreeNilElement operator*(const FreeNilElement& a, const FreeNilElement& b) { return multiply(a, b); }

/// Image of a under the endomorphism sending the i-th generator to images[i].
FreeNilElement apply_endo(std::span<const FreeNilElement> images, const FreeNilElement& a);

/// Induced map on F/F': column j holds the generator exponents of images[j].
IntMatrix abelianization_matrix(std::span<const FreeNilElement> images);

} // namespace nilforge
