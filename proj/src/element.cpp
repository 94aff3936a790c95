#include "nilforge/element.hpp"

#include "nilforge/evaluate.hpp"

#include <sstream>
#include <stdexcept>

namespace nilforge {

namespace {

void require_same_basis(const FreeNilElement& a, const FreeNilElement& b)
{
    if (&a.basis() != &b.basis())
        throw std::invalid_argument("basis mismatch: " + a.basis().name() + " vs " + b.basis().name());
}

struct FreeOps {
    using Element = FreeNilElement;
    BasisPtr basis;
    Element identity() const { return Element(basis); }
    Element mul(const Element& a, const Element& b) const { return multiply(a, b); }
    Element inv(const Element& a) const { return inverse(a); }
    Element pow(const Element& a, const Integer& n) const { return power(a, n); }
};

} // namespace

FreeNilElement::FreeNilElement(BasisPtr basis) : basis_(std::move(basis))
{
    if (!basis_)
        throw std::invalid_argument("null basis");
}

FreeNilElement::FreeNilElement(BasisPtr basis, std::span<const Integer> exponents) : FreeNilElement(std::move(basis))
{
    if (exponents.size() != basis_->size())
        throw std::invalid_argument("exponent vector length does not match basis size");
    for (std::size_t s = 0; s < exponents.size(); ++s)
        exps_[s] = exponents[s];
}

FreeNilElement::FreeNilElement(BasisPtr basis, std::initializer_list<long> exponents)
    : FreeNilElement(std::move(basis))
{
    if (exponents.size() != basis_->size())
        throw std::invalid_argument("exponent vector length does not match basis size");
    std::size_t s = 0;
    for (long e : exponents)
        exps_[s++] = e;
}

FreeNilElement::FreeNilElement(BasisPtr basis, const Exponents<Integer>& exponents)
    : basis_(std::move(basis)), exps_(exponents)
{
    for (std::size_t s = basis_->size(); s < kMaxSymbols; ++s)
        exps_[s] = 0;
}

FreeNilElement FreeNilElement::symbol(BasisPtr basis, std::size_t s, const Integer& n)
{
    FreeNilElement e(std::move(basis));
    if (s >= e.size())
        throw std::out_of_range("symbol index out of range");
    e.exps_[s] = n;
    return e;
}

std::vector<Integer> FreeNilElement::exponent_vector() const
{
    return {exps_.begin(), exps_.begin() + static_cast<std::ptrdiff_t>(size())};
}

bool FreeNilElement::is_identity() const
{
    for (std::size_t s = 0; s < size(); ++s)
        if (exps_[s] != 0)
            return false;
    return true;
}

GroupWord FreeNilElement::to_word() const
{
    GroupWord w;
    for (std::size_t s = 0; s < size(); ++s)
        if (exps_[s] != 0)
            w.letters.push_back({s, exps_[s]});
    return w;
}

std::string FreeNilElement::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t s = 0; s < size(); ++s) {
        if (exps_[s] == 0)
            continue;
        os << (first ? "" : " ") << basis_->symbol(s).name << "^" << exps_[s];
        first = false;
    }
    return first ? "1" : os.str();
}

bool operator==(const FreeNilElement& a, const FreeNilElement& b)
{
    return &a.basis() == &b.basis() && a.exps_ == b.exps_;
}

FreeNilElement collect(const BasisPtr& basis, const GroupWord& word)
{
    Collector<Integer> c(*basis);
    Exponents<Integer> v{};
    for (const auto& l : word.letters) {
        if (l.symbol >= basis->size())
            throw std::out_of_range("word letter refers to an unknown symbol");
        c.multiply_letter(v, l.symbol, l.exponent);
    }
    return FreeNilElement(basis, v);
}

FreeNilElement multiply(const FreeNilElement& a, const FreeNilElement& b)
{
    require_same_basis(a, b);
    Collector<Integer> c(a.basis());
    Exponents<Integer> v = a.exponents();
    c.multiply(v, b.exponents());
    return FreeNilElement(a.basis_ptr(), v);
}

FreeNilElement inverse(const FreeNilElement& a)
{
    Collector<Integer> c(a.basis());
    return FreeNilElement(a.basis_ptr(), c.inverse(a.exponents()));
}

FreeNilElement power(const FreeNilElement& a, const Integer& n)
{
    Collector<Integer> c(a.basis());
    return FreeNilElement(a.basis_ptr(), c.power(a.exponents(), n));
}

FreeNilElement commutator(const FreeNilElement& a, const FreeNilElement& b)
{
    require_same_basis(a, b);
    return multiply(multiply(inverse(a), inverse(b)), multiply(a, b));
}

FreeNilElement conjugate(const FreeNilElement& a, const FreeNilElement& by)
{
    require_same_basis(a, by);
    return multiply(multiply(inverse(by), a), by);
}

FreeNilElement apply_endo(std::span<const FreeNilElement> images, const FreeNilElement& a)
{
    const NilpotentBasis& basis = a.basis();
    if (images.size() != basis.rank())
        throw std::invalid_argument("expected " + std::to_string(basis.rank()) + " generator images, got " +
                                    std::to_string(images.size()));
    for (const auto& im : images)
        require_same_basis(im, a);
    FreeOps ops{a.basis_ptr()};
    auto syms = symbol_images(basis, images, ops);
    return evaluate_word(ops, std::span<const FreeNilElement>(syms), a.exponents());
}

IntMatrix abelianization_matrix(std::span<const FreeNilElement> images)
{
    if (images.empty())
        throw std::invalid_argument("no images");
    const NilpotentBasis& basis = images[0].basis();
    const std::size_t r = basis.rank();
    if (images.size() != r)
        throw std::invalid_argument("expected one image per generator");
    IntMatrix m(r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < r; ++i)
            m(i, j) = images[j][i];
    return m;
}

} // namespace nilforge
