#include "nilforge/basis.hpp"

#include "nilforge/series.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace nilforge {

namespace {

std::optional<std::size_t> bracket_symbol(const std::vector<BasisSymbol>& symbols, std::size_t a, std::size_t b)
{
    for (std::size_t s = 0; s < symbols.size(); ++s)
        if (symbols[s].bracket && symbols[s].bracket->first == a && symbols[s].bracket->second == b)
            return s;
    return std::nullopt;
}

RuleVector unit(std::size_t s)
{
    RuleVector v{};
    v[s] = 1;
    return v;
}

} // namespace

std::shared_ptr<const NilpotentBasis> NilpotentBasis::create(std::string name, std::size_t rank,
                                                             int nilpotency_class,
                                                             std::vector<BasisSymbol> symbols)
{
    if (nilpotency_class < 1 || nilpotency_class > 3)
        throw std::invalid_argument("only nilpotency class 1..3 is supported");
    if (symbols.size() > kMaxSymbols)
        throw std::invalid_argument("too many basis symbols");
    if (rank == 0 || rank > symbols.size())
        throw std::invalid_argument("bad rank");
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const auto& s = symbols[i];
        if (i < rank && (s.weight != 1 || s.bracket))
            throw std::invalid_argument("the first `rank` symbols must be weight-1 generators");
        if (i >= rank) {
            if (!s.bracket || s.bracket->first >= i || s.bracket->second >= i)
                throw std::invalid_argument("symbol " + s.name + " needs a bracket of earlier symbols");
            int w = symbols[s.bracket->first].weight + symbols[s.bracket->second].weight;
            if (w != s.weight)
                throw std::invalid_argument("weight of " + s.name + " does not match its bracket");
        }
        if (s.weight > nilpotency_class)
            throw std::invalid_argument("symbol weight exceeds class");
        if (i > 0 && s.weight < symbols[i - 1].weight)
            throw std::invalid_argument("weights must be non-decreasing");
    }

    std::shared_ptr<NilpotentBasis> b(new NilpotentBasis());
    b->name_ = std::move(name);
    b->rank_ = rank;
    b->class_ = nilpotency_class;
    b->symbols_ = std::move(symbols);
    b->derive_rules();
    return b;
}

std::optional<std::size_t> NilpotentBasis::find(std::string_view name) const
{
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name)
            return i;
    return std::nullopt;
}

void NilpotentBasis::derive_rules()
{
    const std::size_t n = symbols_.size();
    kinds_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        int w = symbols_[i].weight;
        if (w == 1)
            kinds_[i] = SymbolKind::generator;
        else if (w == class_)
            kinds_[i] = SymbolKind::central;
        else
            kinds_[i] = SymbolKind::middle;
    }

    const std::size_t cells = kMaxSymbols * kMaxSymbols;
    pos_.assign(cells, RuleVector{});
    neg_.assign(cells, RuleVector{});
    trivial_.assign(cells, true);
    pair_pos_.assign(cells, GeneratorPairData{});
    pair_neg_.assign(cells, GeneratorPairData{});
    comm_.assign(cells, RuleVector{});

    auto bracket_or_trivial = [&](std::size_t a, std::size_t b) -> std::optional<std::size_t> {
        auto s = bracket_symbol(symbols_, a, b);
        if (!s && symbols_[a].weight + symbols_[b].weight <= class_)
            throw std::invalid_argument("basis lacks a symbol for [" + symbols_[a].name + "," +
                                        symbols_[b].name + "]");
        return s;
    };

    for (std::size_t high = 0; high < n; ++high) {
        for (std::size_t low = 0; low < high; ++low) {
            const std::size_t cell = high * kMaxSymbols + low;
            RuleVector p = unit(high), q = unit(high);
            // high^low = high [high,low];
            // high^(low^-1) = high [high,low]^-1 [high,low,low]  (class <= 3).
            if (auto s = bracket_or_trivial(high, low)) {
                trivial_[cell] = false;
                p[*s] += 1;
                q[*s] -= 1;
                if (auto t = bracket_or_trivial(*s, low))
                    q[*t] += 1;
            }
            pos_[cell] = p;
            neg_[cell] = q;
        }
    }

    // Split the generator-pair rules into middle and central parts.
    for (std::size_t j = 0; j < n; ++j) {
        if (kinds_[j] == SymbolKind::generator)
            continue;
        for (std::size_t g = 0; g < j; ++g) {
            if (kinds_[g] != SymbolKind::generator)
                continue;
            RuleVector c = pos_[j * kMaxSymbols + g];
            c[j] = 0;
            for (std::size_t s = 0; s < n; ++s)
                if (c[s] != 0 && kinds_[s] != SymbolKind::central)
                    throw std::logic_error("conjugate of a non-generator is not central modulo itself");
            comm_[j * kMaxSymbols + g] = c;
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (kinds_[j] != SymbolKind::generator)
            continue;
        for (std::size_t k = 0; k < j; ++k) {
            for (bool inv : {false, true}) {
                const RuleVector& rule = (inv ? neg_ : pos_)[j * kMaxSymbols + k];
                GeneratorPairData d;
                for (std::size_t s = j + 1; s < n; ++s) {
                    if (rule[s] == 0)
                        continue;
                    if (kinds_[s] == SymbolKind::middle)
                        d.middle[s] = rule[s];
                    else if (kinds_[s] == SymbolKind::central)
                        d.central[s] = rule[s];
                    else
                        throw std::logic_error("generator rule produced a generator");
                }
                for (std::size_t s = j + 1; s < n; ++s) {
                    if (d.middle[s] == 0)
                        continue;
                    const RuleVector& sr = (inv ? neg_ : pos_)[s * kMaxSymbols + k];
                    for (std::size_t t = s + 1; t < n; ++t)
                        d.middle_shift[t] += d.middle[s] * sr[t];
                }
                (inv ? pair_neg_ : pair_pos_)[j * kMaxSymbols + k] = d;
            }
        }
    }
}

namespace {

BasisPtr make_f23()
{
    return NilpotentBasis::create("F23", 2, 3,
                                  {{"x", 1, std::nullopt},
                                   {"y", 1, std::nullopt},
                                   {"[y,x]", 2, std::pair<std::size_t, std::size_t>{1, 0}},
                                   {"[y,x,x]", 3, std::pair<std::size_t, std::size_t>{2, 0}},
                                   {"[y,x,y]", 3, std::pair<std::size_t, std::size_t>{2, 1}}});
}

BasisPtr make_f32()
{
    return NilpotentBasis::create("F32", 3, 2,
                                  {{"x", 1, std::nullopt},
                                   {"y", 1, std::nullopt},
                                   {"z", 1, std::nullopt},
                                   {"[y,x]", 2, std::pair<std::size_t, std::size_t>{1, 0}},
                                   {"[z,x]", 2, std::pair<std::size_t, std::size_t>{2, 0}},
                                   {"[z,y]", 2, std::pair<std::size_t, std::size_t>{2, 1}}});
}

} // namespace

BasisPtr builtin_basis(std::string_view name)
{
    static std::mutex mutex;
    static std::map<std::string, BasisPtr, std::less<>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(name); it != cache.end())
        return it->second;
    BasisPtr b;
    if (name == "F23")
        b = make_f23();
    else if (name == "F32")
        b = make_f32();
    else
        throw std::invalid_argument("unknown basis '" + std::string(name) + "' (expected F23 or F32)");
    verify_rules_against_series(*b);
    cache.emplace(std::string(name), b);
    return b;
}

} // namespace nilforge
