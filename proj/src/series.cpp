#include "nilforge/series.hpp"

#include "nilforge/element.hpp"

#include <sstream>
#include <stdexcept>

namespace nilforge {

TruncatedSeries::TruncatedSeries(std::size_t rank, int degree) : rank_(rank), degree_(degree)
{
    if (rank == 0 || degree < 0)
        throw std::invalid_argument("bad series shape");
    std::size_t total = 0, block = 1;
    for (int d = 0; d <= degree; ++d) {
        offsets_.push_back(total);
        total += block;
        block *= rank;
    }
    offsets_.push_back(total);
    coeffs_.assign(total, Integer(0));
}

TruncatedSeries TruncatedSeries::one(std::size_t rank, int degree)
{
    TruncatedSeries s(rank, degree);
    s.coeffs_[0] = 1;
    return s;
}

TruncatedSeries TruncatedSeries::generator(std::size_t rank, int degree, std::size_t i)
{
    TruncatedSeries s = one(rank, degree);
    if (degree >= 1)
        s.coeffs_[s.offset(1) + i] = 1;
    return s;
}

std::size_t TruncatedSeries::index_of(std::span<const std::size_t> monomial) const
{
    if (monomial.size() > static_cast<std::size_t>(degree_))
        throw std::out_of_range("monomial degree exceeds truncation");
    std::size_t idx = 0;
    for (std::size_t letter : monomial) {
        if (letter >= rank_)
            throw std::out_of_range("letter index out of range");
        idx = idx * rank_ + letter;
    }
    return offset(static_cast<int>(monomial.size())) + idx;
}

const Integer& TruncatedSeries::coefficient(std::span<const std::size_t> monomial) const
{
    return coeffs_[index_of(monomial)];
}

Integer& TruncatedSeries::coefficient(std::span<const std::size_t> monomial)
{
    return coeffs_[index_of(monomial)];
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& other) const
{
    if (rank_ != other.rank_ || degree_ != other.degree_)
        throw std::invalid_argument("series shape mismatch");
    TruncatedSeries out(rank_, degree_);
    std::size_t block_a = 1;
    for (int da = 0; da <= degree_; ++da, block_a *= rank_) {
        std::size_t block_b = 1;
        for (int db = 0; da + db <= degree_; ++db, block_b *= rank_) {
            const std::size_t base_out = out.offset(da + db);
            for (std::size_t ia = 0; ia < block_a; ++ia) {
                const Integer& ca = coeffs_[offset(da) + ia];
                if (ca == 0)
                    continue;
                for (std::size_t ib = 0; ib < block_b; ++ib) {
                    const Integer& cb = other.coeffs_[other.offset(db) + ib];
                    if (cb == 0)
                        continue;
                    out.coeffs_[base_out + ia * block_b + ib] += ca * cb;
                }
            }
        }
    }
    return out;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& other) const
{
    TruncatedSeries out = *this;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        out.coeffs_[i] -= other.coeffs_[i];
    return out;
}

TruncatedSeries TruncatedSeries::power(const Integer& n) const
{
    if (coeffs_[0] != 1)
        throw std::domain_error("power requires constant term 1");
    TruncatedSeries a = *this;
    a.coeffs_[0] = 0;
    // sum_k binom(n, k) a^k, exact for negative n as well
    TruncatedSeries result = one(rank_, degree_);
    TruncatedSeries a_pow = one(rank_, degree_);
    Integer binom = 1;
    for (int k = 1; k <= degree_; ++k) {
        a_pow = a_pow * a;
        binom = binom * (n - (k - 1));
        mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), static_cast<unsigned long>(k));
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (a_pow.coeffs_[i] != 0)
                result.coeffs_[i] += binom * a_pow.coeffs_[i];
    }
    return result;
}

std::string TruncatedSeries::to_string(std::span<const std::string> letter_names) const
{
    std::ostringstream os;
    bool first = true;
    std::size_t block = 1;
    for (int d = 0; d <= degree_; ++d, block *= rank_) {
        for (std::size_t i = 0; i < block; ++i) {
            const Integer& c = coeffs_[offset(d) + i];
            if (c == 0)
                continue;
            if (!first)
                os << (c > 0 ? " + " : " - ");
            else if (c < 0)
                os << "-";
            first = false;
            Integer mag = abs(c);
            if (d == 0 || mag != 1)
                os << mag;
            std::vector<std::size_t> letters(static_cast<std::size_t>(d));
            std::size_t rest = i;
            for (int pos = d - 1; pos >= 0; --pos) {
                letters[static_cast<std::size_t>(pos)] = rest % rank_;
                rest /= rank_;
            }
            for (std::size_t l : letters)
                os << letter_names[l];
        }
    }
    if (first)
        os << "0";
    return os.str();
}

TruncatedSeries series_multiply(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }

TruncatedSeries symbol_series(const NilpotentBasis& basis, std::size_t s)
{
    const int degree = basis.nilpotency_class();
    const auto& sym = basis.symbol(s);
    if (!sym.bracket)
        return TruncatedSeries::generator(basis.rank(), degree, s);
    TruncatedSeries a = symbol_series(basis, sym.bracket->first);
    TruncatedSeries b = symbol_series(basis, sym.bracket->second);
    return a.inverse() * b.inverse() * a * b;
}

TruncatedSeries magnus_embed(const FreeNilElement& a)
{
    const NilpotentBasis& basis = a.basis();
    if (basis.nilpotency_class() > 3)
        throw std::invalid_argument("class > 3 unsupported");
    TruncatedSeries out = TruncatedSeries::one(basis.rank(), basis.nilpotency_class());
    for (std::size_t s = 0; s < basis.size(); ++s)
        if (a[s] != 0)
            out = out * symbol_series(basis, s).power(a[s]);
    return out;
}

TruncatedSeries word_series(const NilpotentBasis& basis, const GroupWord& w)
{
    TruncatedSeries out = TruncatedSeries::one(basis.rank(), basis.nilpotency_class());
    for (const auto& l : w.letters)
        out = out * symbol_series(basis, l.symbol).power(l.exponent);
    return out;
}

namespace {

TruncatedSeries rule_series(const NilpotentBasis& basis, const RuleVector& rule)
{
    TruncatedSeries out = TruncatedSeries::one(basis.rank(), basis.nilpotency_class());
    for (std::size_t s = 0; s < basis.size(); ++s)
        if (rule[s] != 0)
            out = out * symbol_series(basis, s).power(Integer(rule[s]));
    return out;
}

} // namespace

void verify_rules_against_series(const NilpotentBasis& basis)
{
    for (std::size_t high = 0; high < basis.size(); ++high) {
        for (std::size_t low = 0; low < high; ++low) {
            TruncatedSeries h = symbol_series(basis, high);
            TruncatedSeries l = symbol_series(basis, low);
            TruncatedSeries l_inv = l.inverse();
            if (l_inv * h * l != rule_series(basis, basis.conjugate(high, low, false)) ||
                l * h * l_inv != rule_series(basis, basis.conjugate(high, low, true)))
                throw std::logic_error("conjugation rule for (" + basis.symbol(high).name + ", " +
                                       basis.symbol(low).name + ") disagrees with the series oracle");
        }
    }
}

} // namespace nilforge
