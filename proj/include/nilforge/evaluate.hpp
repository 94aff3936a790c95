#pragma once

#include "nilforge/basis.hpp"
#include "nilforge/collector.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace nilforge {

// Ops provides: using Element; Element identity() const; Element mul(a, b) const;
// Element inv(a) const; Element pow(a, n) const.

/// Images of every basis symbol when generator i maps to gens[i]; brackets
/// are evaluated as group commutators [a,b] = a^-1 b^-1 a b.
template <class Ops>
std::vector<typename Ops::Element> symbol_images(const NilpotentBasis& basis,
                                                 std::span<const typename Ops::Element> gens, const Ops& ops)
{
    if (gens.size() != basis.rank())
        throw std::invalid_argument("expected one image per generator");
    std::vector<typename Ops::Element> out;
    out.reserve(basis.size());
    for (std::size_t s = 0; s < basis.size(); ++s) {
        const auto& sym = basis.symbol(s);
        if (!sym.bracket) {
            out.push_back(gens[s]);
            continue;
        }
        const auto& a = out[sym.bracket->first];
        const auto& b = out[sym.bracket->second];
        out.push_back(ops.mul(ops.mul(ops.inv(a), ops.inv(b)), ops.mul(a, b)));
    }
    return out;
}

/// Evaluates the normal-form word with the given exponents under symbol images.
template <class Ops, class Int>
typename Ops::Element evaluate_word(const Ops& ops, std::span<const typename Ops::Element> images,
                                    const Exponents<Int>& exps)
{
    auto acc = ops.identity();
    for (std::size_t s = 0; s < images.size(); ++s)
        if (exps[s] != 0)
            acc = ops.mul(acc, ops.pow(images[s], exps[s]));
    return acc;
}

} // namespace nilforge
