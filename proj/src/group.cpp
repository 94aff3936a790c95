#include "nilforge/group.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>
#include <thread>

namespace nilforge {

using Id = FiniteGroup::Id;

FiniteGroup::FiniteGroup(QuotientPtr q) : q_(std::move(q)), order_(q_->size())
{
    if (order_ > kMaxScanOrder)
        throw std::length_error("group of order " + std::to_string(order_) + " exceeds the element-scan bound " +
                                std::to_string(kMaxScanOrder));
    const auto n = static_cast<std::size_t>(order_);
    for (std::size_t i = 0; i < q_->rank(); ++i)
        generators_.push_back(id(q_->generator(i)));

    inverse_.resize(n);
    for (std::size_t a = 0; a < n; ++a)
        inverse_[a] = id(q_->inv(q_->element(static_cast<std::int64_t>(a))));

    if (order_ <= kMaxTableOrder) {
        // Right multiplication by each generator, then every row of the
        // table follows a spanning tree: a * (b g) = (a * b) g.
        std::vector<std::vector<Id>> right(generators_.size(), std::vector<Id>(n));
        for (std::size_t s = 0; s < generators_.size(); ++s)
            for (std::size_t a = 0; a < n; ++a)
                right[s][a] = id(q_->mul(q_->element(static_cast<std::int64_t>(a)), q_->element(generators_[s])));
        std::vector<Id> parent(n, -1), via(n, -1), bfs{0};
        parent[0] = 0;
        for (std::size_t i = 0; i < bfs.size(); ++i)
            for (std::size_t s = 0; s < generators_.size(); ++s) {
                Id b = right[s][static_cast<std::size_t>(bfs[i])];
                if (parent[static_cast<std::size_t>(b)] < 0) {
                    parent[static_cast<std::size_t>(b)] = bfs[i];
                    via[static_cast<std::size_t>(b)] = static_cast<Id>(s);
                    bfs.push_back(b);
                }
            }
        if (bfs.size() != n)
            throw std::logic_error("generators do not generate " + q_->label());
        table_.resize(n * n);
        for (std::size_t a = 0; a < n; ++a) {
            Id* row = &table_[a * n];
            row[0] = static_cast<Id>(a);
            for (std::size_t i = 1; i < n; ++i) {
                auto b = static_cast<std::size_t>(bfs[i]);
                row[b] = right[static_cast<std::size_t>(via[b])][static_cast<std::size_t>(row[parent[b]])];
            }
        }
    }

    // Frattini quotient F_p^rank / W with W spanned by weight-1 parts of the rules.
    const std::int64_t p = prime();
    if (p > 0) {
        const std::size_t r = rank();
        for (const auto& rule : q_->rules()) {
            std::vector<std::int64_t> v(r);
            for (std::size_t i = 0; i < r; ++i)
                v[i] = mod(rule[i], p);
            for (std::size_t k = 0; k < relation_rows_.size(); ++k) {
                std::int64_t f = v[pivots_[k]];
                if (f != 0)
                    for (std::size_t i = 0; i < r; ++i)
                        v[i] = mod(v[i] - f * relation_rows_[k][i], p);
            }
            auto lead = std::find_if(v.begin(), v.end(), [](std::int64_t e) { return e != 0; });
            if (lead == v.end())
                continue;
            std::size_t c = static_cast<std::size_t>(lead - v.begin());
            std::int64_t scale = inverse_mod(v[c], p);
            for (auto& e : v)
                e = mod(e * scale, p);
            for (std::size_t k = 0; k < relation_rows_.size(); ++k) {
                std::int64_t f = relation_rows_[k][c];
                if (f != 0)
                    for (std::size_t i = 0; i < r; ++i)
                        relation_rows_[k][i] = mod(relation_rows_[k][i] - f * v[i], p);
            }
            relation_rows_.push_back(v);
            pivots_.push_back(c);
        }
        for (std::size_t i = 0; i < r; ++i)
            if (std::find(pivots_.begin(), pivots_.end(), i) == pivots_.end())
                free_columns_.push_back(i);
    }
}

GroupPtr make_group(const RelatorSet& rel)
{
    return std::make_shared<FiniteGroup>(std::make_shared<FiniteQuotient>(make_quotient(rel)));
}

Id FiniteGroup::mul(Id a, Id b) const
{
    if (!table_.empty())
        return table_[static_cast<std::size_t>(a) * static_cast<std::size_t>(order_) + static_cast<std::size_t>(b)];
    return id(q_->mul(element(a), element(b)));
}

Id FiniteGroup::pow(Id a, std::int64_t n) const
{
    n = mod(n, order_);
    Id result = 0;
    while (n > 0) {
        if (n & 1)
            result = mul(result, a);
        n >>= 1;
        if (n > 0)
            a = mul(a, a);
    }
    return result;
}

std::int64_t FiniteGroup::element_order(Id a) const
{
    const std::int64_t p = prime();
    if (p > 0) {
        std::int64_t ord = 1;
        while (a != 0) {
            a = pow(a, p);
            ord *= p;
        }
        return ord;
    }
    std::int64_t ord = 1;
    for (Id b = a; b != 0; b = mul(b, a))
        ++ord;
    return ord;
}

std::vector<std::int64_t> FiniteGroup::frattini_coords(Id a) const
{
    const std::int64_t p = prime();
    if (p <= 0)
        throw std::logic_error("Frattini coordinates need a known prime");
    const std::size_t r = rank();
    PcElement e = element(a);
    std::vector<std::int64_t> v(r);
    for (std::size_t i = 0; i < r; ++i)
        v[i] = mod(e.exps[i], p);
    for (std::size_t k = 0; k < relation_rows_.size(); ++k) {
        std::int64_t f = v[pivots_[k]];
        if (f != 0)
            for (std::size_t i = 0; i < r; ++i)
                v[i] = mod(v[i] - f * relation_rows_[k][i], p);
    }
    std::vector<std::int64_t> out;
    for (auto c : free_columns_)
        out.push_back(v[c]);
    return out;
}

Id GroupOps::pow(Id a, const Integer& n) const
{
    Integer r;
    Integer ord(static_cast<long>(g->order()));
    mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), ord.get_mpz_t());
    return g->pow(a, r.get_si());
}

// ---------------------------------------------------------------- subgroups

bool Subgroup::contains(Id a) const { return std::binary_search(elements.begin(), elements.end(), a); }

bool Subgroup::is_abelian() const
{
    for (std::size_t i = 0; i < generators.size(); ++i)
        for (std::size_t j = i + 1; j < generators.size(); ++j)
            if (parent->mul(generators[i], generators[j]) != parent->mul(generators[j], generators[i]))
                return false;
    return true;
}

bool Subgroup::is_normal() const
{
    for (Id h : generators)
        for (Id g : parent->generators())
            if (!contains(parent->conj(h, g)))
                return false;
    return true;
}

namespace {

// Closure of gens, recording membership in `in`.
std::vector<Id> close(const FiniteGroup& g, const std::vector<Id>& gens, std::vector<char>& in)
{
    in.assign(static_cast<std::size_t>(g.order()), 0);
    std::vector<Id> elems{0};
    in[0] = 1;
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (Id s : gens) {
            Id e = g.mul(elems[i], s);
            if (!in[static_cast<std::size_t>(e)]) {
                in[static_cast<std::size_t>(e)] = 1;
                elems.push_back(e);
            }
        }
    return elems;
}

// Subgroup generated by candidates, keeping only the candidates that enlarge it.
Subgroup greedy_closure(const FiniteGroup& g, const std::vector<Id>& candidates)
{
    Subgroup s;
    s.parent = &g;
    std::vector<char> in;
    s.elements = close(g, {}, in);
    for (Id c : candidates) {
        if (in[static_cast<std::size_t>(c)])
            continue;
        s.generators.push_back(c);
        s.elements = close(g, s.generators, in);
    }
    std::sort(s.elements.begin(), s.elements.end());
    return s;
}

} // namespace

Subgroup subgroup_closure(const FiniteGroup& g, std::vector<Id> gens)
{
    Subgroup s;
    s.parent = &g;
    std::vector<char> in;
    s.elements = close(g, gens, in);
    std::sort(s.elements.begin(), s.elements.end());
    s.generators = std::move(gens);
    return s;
}

Subgroup normal_closure(const FiniteGroup& g, std::vector<Id> gens)
{
    for (;;) {
        Subgroup s = subgroup_closure(g, gens);
        std::vector<Id> extra;
        for (Id h : s.generators)
            for (Id x : g.generators()) {
                Id c = g.conj(h, x);
                if (!s.contains(c) && std::find(extra.begin(), extra.end(), c) == extra.end())
                    extra.push_back(c);
            }
        if (extra.empty())
            return s;
        gens.insert(gens.end(), extra.begin(), extra.end());
    }
}

Subgroup subgroup_from_elements(const FiniteGroup& g, std::vector<Id> elements)
{
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    Subgroup s = greedy_closure(g, elements);
    if (s.elements != elements)
        throw std::logic_error("element set is not a subgroup");
    return s;
}

Functors subgroup_functors(const FiniteGroup& g)
{
    const auto n = static_cast<Id>(g.order());
    std::vector<Id> central;
    for (Id a = 0; a < n; ++a) {
        bool ok = true;
        for (Id x : g.generators())
            if (g.mul(a, x) != g.mul(x, a)) {
                ok = false;
                break;
            }
        if (ok)
            central.push_back(a);
    }
    std::vector<Id> comms;
    for (std::size_t i = 0; i < g.rank(); ++i)
        for (std::size_t j = i + 1; j < g.rank(); ++j)
            comms.push_back(g.comm(g.generator(j), g.generator(i)));
    const std::int64_t p = g.prime();
    if (p <= 0)
        throw std::logic_error("agemo needs a known prime");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Id> powers;
    for (Id a = 0; a < n; ++a) {
        Id b = g.pow(a, p);
        if (!seen[static_cast<std::size_t>(b)]) {
            seen[static_cast<std::size_t>(b)] = 1;
            powers.push_back(b);
        }
    }
    return {subgroup_from_elements(g, std::move(central)), normal_closure(g, comms), greedy_closure(g, powers)};
}

SeriesInvariants series_invariants(const FiniteGroup& g)
{
    SeriesInvariants out;
    out.order = g.order();
    out.exponent = 1;
    for (Id a = 0; a < static_cast<Id>(g.order()); ++a)
        out.exponent = std::lcm(out.exponent, g.element_order(a));
    Subgroup gamma = subgroup_closure(g, g.generators());
    out.lower_central_orders.push_back(gamma.order());
    while (gamma.order() > 1) {
        std::vector<Id> comms;
        for (Id h : gamma.generators)
            for (Id x : g.generators())
                comms.push_back(g.comm(h, x));
        Subgroup next = normal_closure(g, comms);
        if (next.order() == gamma.order())
            break; // not nilpotent
        gamma = std::move(next);
        out.lower_central_orders.push_back(gamma.order());
        ++out.nilpotency_class;
    }
    if (gamma.order() > 1)
        out.nilpotency_class = -1;
    return out;
}

std::vector<MaximalSubgroup> maximal_subgroups(const FiniteGroup& g)
{
    const std::int64_t p = g.prime();
    const std::size_t d = g.frattini_rank();
    const auto n = static_cast<std::size_t>(g.order());
    std::vector<std::vector<std::int64_t>> coords(n);
    for (std::size_t a = 0; a < n; ++a)
        coords[a] = g.frattini_coords(static_cast<Id>(a));

    std::vector<MaximalSubgroup> out;
    std::vector<std::int64_t> f(d, 0);
    // Functionals with first nonzero coordinate 1, in lexicographic order.
    std::int64_t total = 1;
    for (std::size_t i = 0; i < d; ++i)
        total *= p;
    for (std::int64_t code = 1; code < total; ++code) {
        std::int64_t c = code;
        for (std::size_t i = d; i-- > 0;) {
            f[i] = c % p;
            c /= p;
        }
        auto lead = std::find_if(f.begin(), f.end(), [](std::int64_t e) { return e != 0; });
        if (*lead != 1)
            continue;
        std::vector<Id> elems;
        for (std::size_t a = 0; a < n; ++a) {
            std::int64_t s = 0;
            for (std::size_t i = 0; i < d; ++i)
                s += f[i] * coords[a][i];
            if (s % p == 0)
                elems.push_back(static_cast<Id>(a));
        }
        MaximalSubgroup m;
        m.functional = f;
        m.subgroup = subgroup_from_elements(g, std::move(elems));
        m.abelian = m.subgroup.is_abelian();
        out.push_back(std::move(m));
    }
    return out;
}

// ---------------------------------------------------------------- matrices

std::int64_t FrattiniMatrix::det() const
{
    std::vector<std::int64_t> m = a;
    std::int64_t result = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && m[piv * n + k] == 0)
            ++piv;
        if (piv == n)
            return 0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m[k * n + j], m[piv * n + j]);
            result = mod(-result, p);
        }
        result = mod(result * m[k * n + k], p);
        std::int64_t inv = inverse_mod(m[k * n + k], p);
        for (std::size_t i = k + 1; i < n; ++i) {
            std::int64_t f = mod(m[i * n + k] * inv, p);
            if (f != 0)
                for (std::size_t j = k; j < n; ++j)
                    m[i * n + j] = mod(m[i * n + j] - f * m[k * n + j], p);
        }
    }
    return result;
}

bool FrattiniMatrix::is_lower_triangular() const
{
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if ((*this)(i, j) != 0)
                return false;
    return true;
}

FrattiniMatrix FrattiniMatrix::operator*(const FrattiniMatrix& o) const
{
    if (n != o.n || p != o.p)
        throw std::invalid_argument("matrix shape mismatch");
    FrattiniMatrix out{p, n, std::vector<std::int64_t>(n * n, 0)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t s = 0;
            for (std::size_t k = 0; k < n; ++k)
                s += (*this)(i, k) * o(k, j);
            out.a[i * n + j] = mod(s, p);
        }
    return out;
}

std::string FrattiniMatrix::to_string() const
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < n; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < n; ++j)
            os << (j ? " " : "") << (*this)(i, j);
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------- homomorphisms

RelatorSchedule::RelatorSchedule(const RelatorSet& rel) : rel_(&rel), by_depth_(rel.basis->rank())
{
    const NilpotentBasis& b = *rel.basis;
    // Generator support of every basis symbol.
    std::vector<std::uint32_t> support(b.size(), 0);
    for (std::size_t s = 0; s < b.size(); ++s) {
        const auto& sym = b.symbol(s);
        support[s] = sym.bracket ? support[sym.bracket->first] | support[sym.bracket->second] : 1u << s;
    }
    for (std::size_t i = 0; i < rel.relators.size(); ++i) {
        std::uint32_t mask = 0;
        for (std::size_t s = 0; s < b.size(); ++s)
            if (rel.relators[i][s] != 0)
                mask |= support[s];
        std::size_t depth = 0;
        for (std::size_t g = 0; g < b.rank(); ++g)
            if (mask & (1u << g))
                depth = g;
        by_depth_[depth].push_back(i);
    }
}

Id evaluate_relator(const FiniteGroup& target, const RelatorSet& rel, std::size_t index, const std::vector<Id>& images)
{
    GroupOps ops{&target};
    auto syms = symbol_images(*rel.basis, std::span<const Id>(images), ops);
    return evaluate_word(ops, std::span<const Id>(syms), rel.relators[index].exponents());
}

bool preserves_relations(const FiniteGroup& source, const FiniteGroup& target, const std::vector<Id>& images)
{
    const RelatorSet& rel = source.quotient().relator_set();
    if (images.size() != rel.basis->rank())
        return false;
    GroupOps ops{&target};
    auto syms = symbol_images(*rel.basis, std::span<const Id>(images), ops);
    for (const auto& r : rel.relators)
        if (evaluate_word(ops, std::span<const Id>(syms), r.exponents()) != 0)
            return false;
    return true;
}

Homomorphism make_homomorphism(const FiniteGroup& source, const FiniteGroup& target, std::vector<Id> images)
{
    if (!preserves_relations(source, target, images))
        throw std::invalid_argument("images do not satisfy the relators of " + source.quotient().label());
    return {&source, &target, std::move(images)};
}

Id Homomorphism::apply(Id a) const
{
    GroupOps ops{target};
    auto syms = symbol_images(source->quotient().basis(), std::span<const Id>(images), ops);
    return evaluate_word(ops, std::span<const Id>(syms), source->element(a).exps);
}

bool is_bijective(const Homomorphism& h)
{
    if (h.source->order() != h.target->order())
        return false;
    return subgroup_closure(*h.target, h.images).order() == h.target->order();
}

FrattiniMatrix induced_frattini_matrix(const Homomorphism& h)
{
    const auto& basis_gens = h.source->frattini_basis_generators();
    const std::size_t d = basis_gens.size();
    if (h.target->frattini_rank() != d)
        throw std::invalid_argument("Frattini ranks differ");
    FrattiniMatrix m{h.target->prime(), d, std::vector<std::int64_t>(d * d, 0)};
    for (std::size_t j = 0; j < d; ++j) {
        auto col = h.target->frattini_coords(h.images[basis_gens[j]]);
        for (std::size_t i = 0; i < d; ++i)
            m.a[i * d + j] = col[i];
    }
    return m;
}

void parallel_chunks(std::size_t n, unsigned threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body, std::size_t chunk_count)
{
    if (n == 0 || chunk_count == 0)
        return;
    chunk_count = std::min(chunk_count, n);
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    auto range = [&](std::size_t c) { return std::pair{c * n / chunk_count, (c + 1) * n / chunk_count}; };
    if (threads == 1) {
        for (std::size_t c = 0; c < chunk_count; ++c) {
            auto [b, e] = range(c);
            body(b, e, c);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, chunk_count); ++t)
        pool.emplace_back([&] {
            for (std::size_t c; (c = next.fetch_add(1)) < chunk_count;) {
                auto [b, e] = range(c);
                body(b, e, c);
            }
        });
    for (auto& t : pool)
        t.join();
}

namespace {

// Rank over F_p of a set of column vectors.
std::size_t rank_mod_p(std::vector<std::vector<std::int64_t>> cols, std::int64_t p)
{
    std::size_t rank = 0;
    if (cols.empty())
        return 0;
    const std::size_t d = cols[0].size();
    for (std::size_t row = 0; row < d && rank < cols.size(); ++row) {
        std::size_t piv = rank;
        while (piv < cols.size() && cols[piv][row] == 0)
            ++piv;
        if (piv == cols.size())
            continue;
        std::swap(cols[rank], cols[piv]);
        std::int64_t inv = inverse_mod(cols[rank][row], p);
        for (std::size_t c = rank + 1; c < cols.size(); ++c) {
            std::int64_t f = mod(cols[c][row] * inv, p);
            if (f != 0)
                for (std::size_t i = 0; i < d; ++i)
                    cols[c][i] = mod(cols[c][i] - f * cols[rank][i], p);
        }
        ++rank;
    }
    return rank;
}

} // namespace

std::vector<Homomorphism> all_isomorphisms(const FiniteGroup& g, const FiniteGroup& h, const SearchOptions& opt)
{
    if (g.order() != h.order() || g.frattini_rank() != h.frattini_rank() || g.prime() != h.prime())
        return {};
    if (g.order() > kMaxSearchOrder)
        throw std::length_error("exhaustive isomorphism search is limited to order " + std::to_string(kMaxSearchOrder));
    const std::size_t r = g.rank();
    const std::int64_t p = h.prime();
    const auto n = static_cast<Id>(h.order());

    std::vector<std::int64_t> h_orders(static_cast<std::size_t>(n));
    for (Id a = 0; a < n; ++a)
        h_orders[static_cast<std::size_t>(a)] = h.element_order(a);
    std::vector<std::vector<Id>> candidates(r);
    for (std::size_t i = 0; i < r; ++i) {
        std::int64_t want = g.element_order(g.generator(i));
        for (Id a = 0; a < n; ++a)
            if (h_orders[static_cast<std::size_t>(a)] == want)
                candidates[i].push_back(a);
    }
    std::vector<std::vector<std::int64_t>> h_coords(static_cast<std::size_t>(n));
    for (Id a = 0; a < n; ++a)
        h_coords[static_cast<std::size_t>(a)] = h.frattini_coords(a);

    const RelatorSet& rel = g.quotient().relator_set();
    RelatorSchedule schedule(rel);
    const auto& basis_gens = g.frattini_basis_generators();

    // Depth-first search over image tuples below a fixed first image.
    auto search = [&](Id first, std::vector<std::vector<Id>>& found, std::size_t limit) {
        std::vector<Id> images(r, 0);
        std::function<void(std::size_t)> rec = [&](std::size_t depth) {
            if (found.size() >= limit)
                return;
            std::span<const Id> choices = depth == 0 ? std::span<const Id>(&first, 1) : std::span<const Id>(candidates[depth]);
            for (Id c : choices) {
                images[depth] = c;
                std::vector<std::vector<std::int64_t>> cols;
                for (auto bg : basis_gens)
                    if (bg <= depth)
                        cols.push_back(h_coords[static_cast<std::size_t>(images[bg])]);
                if (rank_mod_p(cols, p) != cols.size())
                    continue;
                bool ok = true;
                for (std::size_t ri : schedule.at_depth(depth))
                    if (evaluate_relator(h, rel, ri, images) != 0) {
                        ok = false;
                        break;
                    }
                if (!ok)
                    continue;
                if (depth + 1 == r)
                    found.push_back(images);
                else
                    rec(depth + 1);
                if (found.size() >= limit)
                    return;
            }
        };
        rec(0);
    };

    const auto& firsts = candidates[0];
    std::vector<std::vector<std::vector<Id>>> per_chunk;
    if (opt.limit) {
        per_chunk.resize(1);
        for (Id f : firsts) {
            search(f, per_chunk[0], *opt.limit);
            if (per_chunk[0].size() >= *opt.limit)
                break;
        }
    } else {
        const std::size_t chunks = std::min<std::size_t>(firsts.size(), 64);
        per_chunk.resize(chunks);
        parallel_chunks(
            firsts.size(), opt.threads,
            [&](std::size_t b, std::size_t e, std::size_t c) {
                for (std::size_t i = b; i < e; ++i)
                    search(firsts[i], per_chunk[c], SIZE_MAX);
            },
            chunks);
    }
    std::vector<Homomorphism> out;
    for (auto& chunk : per_chunk)
        for (auto& images : chunk)
            out.push_back({&g, &h, std::move(images)});
    return out;
}

bool is_isomorphic(const FiniteGroup& g, const FiniteGroup& h)
{
    SearchOptions opt;
    opt.limit = 1;
    return !all_isomorphisms(g, h, opt).empty();
}

std::uint64_t automorphism_count(const FiniteGroup& g, const SearchOptions& opt)
{
    return all_isomorphisms(g, g, opt).size();
}

} // namespace nilforge
