#include "nilforge/quotient.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace nilforge {

namespace {

using BigVec = Exponents<Integer>;
using SmallVec = Exponents<std::int64_t>;

int leading(const BigVec& v, std::size_t n)
{
    for (std::size_t s = 0; s < n; ++s)
        if (v[s] != 0)
            return static_cast<int>(s);
    return -1;
}

BigVec to_big(const SmallVec& v)
{
    BigVec out{};
    for (std::size_t s = 0; s < kMaxSymbols; ++s)
        out[s] = v[s];
    return out;
}

SmallVec to_small(const BigVec& v)
{
    SmallVec out{};
    for (std::size_t s = 0; s < kMaxSymbols; ++s)
        out[s] = to_int64(v[s]);
    return out;
}

// Maintains an induced polycyclic sequence: table[k], if present, has its
// first nonzero exponent at k and that exponent is positive.
class Sifter {
public:
    explicit Sifter(const NilpotentBasis& b) : b_(b), col_(b), table_(b.size()) {}

    // Sifts g through the table, extending or refining it. Returns whether
    // the table changed.
    bool insert(BigVec g)
    {
        const std::size_t n = b_.size();
        bool changed = false;
        std::vector<BigVec> work{std::move(g)};
        while (!work.empty()) {
            BigVec v = std::move(work.back());
            work.pop_back();
            for (;;) {
                int k = leading(v, n);
                if (k < 0)
                    break;
                auto& slot = table_[static_cast<std::size_t>(k)];
                if (!slot) {
                    if (v[k] < 0)
                        v = col_.inverse(v);
                    slot = v;
                    changed = true;
                    break;
                }
                const BigVec t = *slot;
                if (mpz_divisible_p(v[k].get_mpz_t(), t[k].get_mpz_t())) {
                    Integer q = v[k] / t[k];
                    col_.multiply(v, col_.power(t, Integer(-q)));
                    continue;
                }
                // Replace the slot by an element whose leading exponent is gcd(v_k, t_k).
                Integer d, a, c;
                mpz_gcdext(d.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t(), v[k].get_mpz_t(), t[k].get_mpz_t());
                BigVec h = col_.power(v, a);
                col_.multiply(h, col_.power(t, c));
                slot = h;
                changed = true;
                work.push_back(t);
            }
        }
        return changed;
    }

    // Brings the tail exponents of every entry into [0, modulus).
    void canonicalize()
    {
        const std::size_t n = b_.size();
        for (std::size_t j = n; j-- > 0;) {
            if (!table_[j])
                continue;
            BigVec& v = *table_[j];
            for (std::size_t k = j + 1; k < n; ++k) {
                if (!table_[k])
                    continue;
                const BigVec& t = *table_[k];
                Integer q = floor_div(v[k], t[k]);
                if (q != 0)
                    col_.multiply(v, col_.power(t, Integer(-q)));
            }
        }
    }

    BigVec conjugate(const BigVec& a, const BigVec& by) const
    {
        BigVec v = col_.inverse(by);
        col_.multiply(v, a);
        col_.multiply(v, by);
        return v;
    }

    const std::vector<std::optional<BigVec>>& table() const { return table_; }

private:
    const NilpotentBasis& b_;
    Collector<Integer> col_;
    std::vector<std::optional<BigVec>> table_;
};

} // namespace

FiniteQuotient make_quotient(const RelatorSet& rel)
{
    if (!rel.basis)
        throw std::invalid_argument("relator set without basis");
    const NilpotentBasis& b = *rel.basis;
    const std::size_t n = b.size();
    Sifter sifter(b);
    for (const auto& r : rel.relators) {
        if (&r.basis() != &b)
            throw std::invalid_argument("relator over a different basis");
        sifter.insert(r.exponents());
    }

    // Close under conjugation by the generators and their inverses (normality)
    // and by the table entries themselves (induced sequence), until stable.
    bool changed = true;
    while (changed) {
        changed = false;
        sifter.canonicalize();
        const auto snapshot = sifter.table();
        for (std::size_t j = 0; j < n; ++j) {
            if (!snapshot[j])
                continue;
            for (std::size_t g = 0; g < b.rank(); ++g)
                for (int sign : {1, -1}) {
                    BigVec by{};
                    by[g] = sign;
                    changed |= sifter.insert(sifter.conjugate(*snapshot[j], by));
                }
            for (std::size_t i = 0; i < j; ++i) {
                if (!snapshot[i])
                    continue;
                changed |= sifter.insert(sifter.conjugate(*snapshot[j], *snapshot[i]));
                Collector<Integer> col(b);
                changed |= sifter.insert(sifter.conjugate(*snapshot[j], col.inverse(*snapshot[i])));
            }
        }
    }

    std::string missing;
    for (std::size_t k = 0; k < n; ++k)
        if (!sifter.table()[k])
            missing += (missing.empty() ? "" : ", ") + b.symbol(k).name;
    if (!missing.empty())
        throw InfiniteIndexError("normal closure of " + rel.label + " has infinite index: no modulus for " + missing);

    std::vector<std::int64_t> moduli;
    std::vector<SmallVec> rules;
    for (std::size_t k = 0; k < n; ++k) {
        const BigVec& t = *sifter.table()[k];
        moduli.push_back(to_int64(t[k]));
        rules.push_back(to_small(t));
    }
    FiniteQuotient q = FiniteQuotient::from_rules(rel, std::move(moduli), std::move(rules));
    for (const auto& r : rel.relators)
        if (!membership(q, r))
            throw std::logic_error("inconsistent elimination: relator " + r.to_string() + " survives in " +
                                   rel.label);
    return q;
}

FiniteQuotient FiniteQuotient::from_rules(RelatorSet relators, std::vector<std::int64_t> moduli,
                                          std::vector<Exponents<std::int64_t>> rules)
{
    if (!relators.basis)
        throw std::invalid_argument("relator set without basis");
    const std::size_t n = relators.basis->size();
    if (moduli.size() != n || rules.size() != n)
        throw std::invalid_argument("need one modulus and one rule per basis symbol");
    for (std::size_t k = 0; k < n; ++k) {
        if (moduli[k] < 1)
            throw std::invalid_argument("moduli must be positive");
        for (std::size_t j = 0; j < kMaxSymbols; ++j) {
            bool ok = j < k || j >= n ? rules[k][j] == 0 : j > k || rules[k][j] == moduli[k];
            if (!ok)
                throw std::invalid_argument("rule " + std::to_string(k) + " does not lead with its modulus");
        }
    }
    FiniteQuotient q;
    q.rel_ = std::move(relators);
    q.moduli_ = std::move(moduli);
    q.rules_ = std::move(rules);
    q.finish();
    return q;
}

void FiniteQuotient::finish()
{
    const std::size_t n = moduli_.size();
    Integer ord = 1;
    for (auto m : moduli_)
        ord *= m;
    if (!ord.fits_slong_p())
        throw std::overflow_error("quotient order " + ord.get_str() + " is too large");
    size_ = ord.get_si();
    radix_.assign(n, 1);
    for (std::size_t s = n - 1; s-- > 0;)
        radix_[s] = radix_[s + 1] * moduli_[s + 1];
    Collector<std::int64_t> c(*rel_.basis);
    rule_inverses_.clear();
    for (const auto& r : rules_)
        rule_inverses_.push_back(c.inverse(r));
}

Integer FiniteQuotient::order() const { return Integer(static_cast<long>(size_)); }

PcElement FiniteQuotient::reduce(Exponents<std::int64_t> a) const
{
    Collector<std::int64_t> c(*rel_.basis);
    const std::size_t n = moduli_.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::int64_t q = floor_div(a[k], moduli_[k]);
        if (q == 0)
            continue;
        const SmallVec& step = q > 0 ? rule_inverses_[k] : rules_[k];
        std::int64_t times = q > 0 ? q : -q;
        if (times == 1)
            c.multiply(a, step);
        else
            c.multiply(a, c.power(step, times));
    }
    return PcElement{a};
}

PcElement FiniteQuotient::reduce(const FreeNilElement& a) const
{
    if (&a.basis() != rel_.basis.get())
        throw std::invalid_argument("element is not over the quotient's ambient basis");
    Collector<Integer> c(*rel_.basis);
    BigVec v = a.exponents();
    const std::size_t n = moduli_.size();
    for (std::size_t k = 0; k < n; ++k) {
        Integer q = floor_div(v[k], Integer(static_cast<long>(moduli_[k])));
        if (q != 0)
            c.multiply(v, c.power(to_big(rules_[k]), Integer(-q)));
    }
    return PcElement{to_small(v)};
}

bool FiniteQuotient::is_canonical(const PcElement& a) const
{
    for (std::size_t s = 0; s < kMaxSymbols; ++s) {
        if (s >= moduli_.size()) {
            if (a.exps[s] != 0)
                return false;
        } else if (a.exps[s] < 0 || a.exps[s] >= moduli_[s]) {
            return false;
        }
    }
    return true;
}

PcElement FiniteQuotient::symbol(std::size_t s) const
{
    if (s >= moduli_.size())
        throw std::out_of_range("symbol index out of range");
    SmallVec v{};
    v[s] = 1;
    return reduce(v);
}

PcElement FiniteQuotient::mul(const PcElement& a, const PcElement& b) const
{
    Collector<std::int64_t> c(*rel_.basis);
    SmallVec v = a.exps;
    c.multiply(v, b.exps);
    return reduce(v);
}

PcElement FiniteQuotient::inv(const PcElement& a) const
{
    Collector<std::int64_t> c(*rel_.basis);
    return reduce(c.inverse(a.exps));
}

PcElement FiniteQuotient::pow(const PcElement& a, std::int64_t n) const
{
    PcElement base = n < 0 ? inv(a) : a;
    std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    PcElement result;
    while (e > 0) {
        if (e & 1)
            result = mul(result, base);
        e >>= 1;
        if (e > 0)
            base = mul(base, base);
    }
    return result;
}

PcElement FiniteQuotient::pow(const PcElement& a, const Integer& n) const
{
    // a^|G| = 1, so the exponent only matters modulo the order.
    Integer r;
    Integer ord = order();
    mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), ord.get_mpz_t());
    return pow(a, r.get_si());
}

PcElement FiniteQuotient::comm(const PcElement& a, const PcElement& b) const
{
    return mul(mul(inv(a), inv(b)), mul(a, b));
}

PcElement FiniteQuotient::conj(const PcElement& a, const PcElement& by) const
{
    return mul(mul(inv(by), a), by);
}

std::int64_t FiniteQuotient::index(const PcElement& a) const
{
    std::int64_t idx = 0;
    for (std::size_t s = 0; s < moduli_.size(); ++s)
        idx += a.exps[s] * radix_[s];
    return idx;
}

PcElement FiniteQuotient::element(std::int64_t index) const
{
    if (index < 0 || index >= size_)
        throw std::out_of_range("element index out of range");
    PcElement a;
    for (std::size_t s = moduli_.size(); s-- > 0;) {
        a.exps[s] = index % moduli_[s];
        index /= moduli_[s];
    }
    return a;
}

FreeNilElement FiniteQuotient::lift(const PcElement& a) const { return FreeNilElement(rel_.basis, to_big(a.exps)); }

std::string FiniteQuotient::to_string(const PcElement& a) const { return lift(a).to_string(); }

std::string FiniteQuotient::rule_string(std::size_t k) const
{
    const auto& name = rel_.basis->symbol(k).name;
    PcElement rhs = reduce(FreeNilElement::symbol(rel_.basis, k, Integer(static_cast<long>(moduli_[k]))));
    return name + "^" + std::to_string(moduli_[k]) + " -> " + to_string(rhs);
}

bool membership(const FiniteQuotient& q, const FreeNilElement& a) { return q.reduce(a) == q.identity(); }

} // namespace nilforge
