#pragma once

#include "nilforge/element.hpp"

#include <stdexcept>
#include <string_view>

namespace nilforge {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position);
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Parses a word over the generator names of the basis:
///   expr   := term ('*' term)*
///   term   := factor ('^' integer)?
///   factor := name | '(' expr ')' | '[' expr (',' expr)+ ']'
/// Commutators are left-normed, [a,b] = a^-1 b^-1 a b. The empty word and
/// "1" are the identity.
FreeNilElement parse_word(const BasisPtr& basis, std::string_view text);

} // namespace nilforge
