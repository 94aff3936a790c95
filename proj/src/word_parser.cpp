#include "nilforge/word_parser.hpp"

#include <cctype>

namespace nilforge {

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at position " + std::to_string(position)), position_(position)
{
}

namespace {

class Parser {
public:
    Parser(const BasisPtr& basis, std::string_view text) : b_(basis), s_(text) {}

    FreeNilElement run()
    {
        skip();
        if (pos_ == s_.size())
            return FreeNilElement(b_);
        FreeNilElement e = expr();
        skip();
        if (pos_ != s_.size())
            throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    FreeNilElement expr()
    {
        FreeNilElement e = term();
        while (accept('*'))
            e = e * term();
        return e;
    }

    FreeNilElement term()
    {
        FreeNilElement f = factor();
        if (accept('^'))
            f = power(f, integer());
        return f;
    }

    Integer integer()
    {
        skip();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+'))
            ++pos_;
        std::size_t digits = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (pos_ == digits)
            throw ParseError("expected an integer exponent", digits);
        std::string text(s_.substr(start, pos_ - start));
        if (text[0] == '+')
            text.erase(0, 1);
        return Integer(text);
    }

    FreeNilElement factor()
    {
        skip();
        if (pos_ == s_.size())
            throw ParseError("unexpected end of input", pos_);
        std::size_t start = pos_;
        if (accept('(')) {
            FreeNilElement e = expr();
            expect(')');
            return e;
        }
        if (accept('[')) {
            FreeNilElement e = expr();
            expect(',');
            e = commutator(e, expr());
            while (accept(','))
                e = commutator(e, expr());
            expect(']');
            return e;
        }
        if (s_[pos_] == '1' && (pos_ + 1 == s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
            ++pos_;
            return FreeNilElement(b_);
        }
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        if (pos_ == start)
            throw ParseError(std::string("unexpected '") + s_[start] + "'", start);
        std::string name(s_.substr(start, pos_ - start));
        auto sym = b_->find(name);
        if (!sym || *sym >= b_->rank())
            throw ParseError("unknown generator '" + name + "' for basis " + b_->name(), start);
        return FreeNilElement::symbol(b_, *sym);
    }

    const BasisPtr& b_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

FreeNilElement parse_word(const BasisPtr& basis, std::string_view text)
{
    return Parser(basis, text).run();
}

} // namespace nilforge
