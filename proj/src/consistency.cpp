#include "nilforge/quotient.hpp"

#include <random>
#include <sstream>

namespace nilforge {

namespace {

using SmallVec = Exponents<std::int64_t>;

SmallVec random_free(std::mt19937_64& rng, const NilpotentBasis& b, int bound)
{
    std::uniform_int_distribution<std::int64_t> d(-bound, bound);
    Collector<std::int64_t> c(b);
    SmallVec v{};
    std::uniform_int_distribution<std::size_t> len(1, 6), sym(0, b.size() - 1);
    for (std::size_t i = len(rng); i > 0; --i)
        c.multiply_letter(v, sym(rng), d(rng));
    return v;
}

// Random elements of N: products of conjugates of relators (and their inverses).
std::vector<SmallVec> normal_pool(const FiniteQuotient& q, std::mt19937_64& rng, std::size_t count)
{
    const auto& rels = q.relator_set().relators;
    const NilpotentBasis& b = q.basis();
    Collector<Integer> big(b);
    std::vector<SmallVec> pool{SmallVec{}};
    if (rels.empty())
        return pool;
    std::uniform_int_distribution<std::size_t> pick(0, rels.size() - 1), factors(1, 3);
    std::bernoulli_distribution flip(0.5);
    while (pool.size() < count) {
        Exponents<Integer> acc{};
        for (std::size_t f = factors(rng); f > 0; --f) {
            Exponents<Integer> r = rels[pick(rng)].exponents();
            if (flip(rng))
                r = big.inverse(r);
            SmallVec w = random_free(rng, b, 3);
            Exponents<Integer> by{};
            for (std::size_t s = 0; s < b.size(); ++s)
                by[s] = w[s];
            Exponents<Integer> conj = big.inverse(by);
            big.multiply(conj, r);
            big.multiply(conj, by);
            big.multiply(acc, conj);
        }
        SmallVec small{};
        for (std::size_t s = 0; s < b.size(); ++s)
            small[s] = to_int64(acc[s]);
        pool.push_back(small);
    }
    return pool;
}

} // namespace

ConsistencyReport consistency_check(const FiniteQuotient& q, const ConsistencyOptions& options)
{
    ConsistencyReport rep;
    auto fail = [&](const std::string& msg) {
        rep.passed = false;
        if (rep.failures.size() < 8)
            rep.failures.push_back(msg);
        ++rep.failure_count;
    };
    const NilpotentBasis& b = q.basis();
    Collector<std::int64_t> c(b);
    std::mt19937_64 rng(options.seed);
    const std::int64_t order = q.size();

    Integer product = 1;
    for (auto m : q.moduli())
        product *= m;
    rep.order_matches = product == q.order();
    if (!rep.order_matches)
        fail("order does not equal the product of the moduli");

    // Retraction, identity and inverses on representatives.
    const PcElement id = q.identity();
    auto check_rep = [&](const PcElement& a) {
        ++rep.representatives_checked;
        if (!q.is_canonical(a) || q.reduce(a.exps) != a)
            fail("reduce is not a retraction at " + q.to_string(a));
        if (q.mul(a, q.inv(a)) != id || q.mul(q.inv(a), a) != id)
            fail("inverse law fails at " + q.to_string(a));
        if (q.mul(a, id) != a || q.mul(id, a) != a)
            fail("identity law fails at " + q.to_string(a));
    };
    rep.representatives_exhaustive = static_cast<std::uint64_t>(order) <= std::max<std::uint64_t>(options.samples, 1);
    if (rep.representatives_exhaustive) {
        for (std::int64_t i = 0; i < order; ++i)
            check_rep(q.element(i));
    } else {
        for (std::uint64_t i = 0; i < options.samples; ++i)
            check_rep(q.random_element(rng));
    }

    // Relators and their conjugates by generators vanish.
    for (const auto& r : q.relator_set().relators) {
        for (std::size_t g = 0; g <= b.rank(); ++g)
            for (int sign : {1, -1}) {
                FreeNilElement x = r;
                if (g < b.rank())
                    x = conjugate(r, FreeNilElement::symbol(q.basis_ptr(), g, sign));
                ++rep.relator_checks;
                if (!membership(q, x))
                    fail("relator consequence " + x.to_string() + " is not in the kernel");
            }
    }

    // reduce(a n1 b n2) = a (.) b for representatives a, b and n1, n2 in N.
    const auto pool = normal_pool(q, rng, 64);
    std::size_t cursor = 0;
    auto check_pair = [&](const PcElement& a, const PcElement& bb) {
        ++rep.multiplicativity_pairs;
        SmallVec v = a.exps;
        c.multiply(v, pool[cursor++ % pool.size()]);
        c.multiply(v, bb.exps);
        c.multiply(v, pool[cursor++ % pool.size()]);
        if (q.reduce(v) != q.mul(a, bb))
            fail("quotient map is not multiplicative at (" + q.to_string(a) + ", " + q.to_string(bb) + ")");
    };
    const auto sq = static_cast<std::uint64_t>(order) * static_cast<std::uint64_t>(order);
    rep.multiplicativity_exhaustive = sq <= options.budget_pairs;
    if (rep.multiplicativity_exhaustive) {
        for (std::int64_t i = 0; i < order; ++i)
            for (std::int64_t j = 0; j < order; ++j)
                check_pair(q.element(i), q.element(j));
    } else {
        for (std::uint64_t i = 0; i < options.samples; ++i)
            check_pair(q.random_element(rng), q.random_element(rng));
    }
    // Arbitrary ambient elements, not only representatives.
    for (std::uint64_t i = 0; i < std::min<std::uint64_t>(options.samples, 10'000); ++i) {
        SmallVec u = random_free(rng, b, 40), w = random_free(rng, b, 40);
        SmallVec uw = u;
        c.multiply(uw, w);
        ++rep.multiplicativity_pairs;
        if (q.reduce(uw) != q.mul(q.reduce(u), q.reduce(w)))
            fail("quotient map is not multiplicative on ambient elements");
    }

    // Associativity.
    rep.associativity_exhaustive = order <= options.exhaustive_associativity_order;
    if (rep.associativity_exhaustive) {
        const auto n = static_cast<std::size_t>(order);
        std::vector<std::int32_t> table(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                table[i * n + j] = static_cast<std::int32_t>(
                    q.index(q.mul(q.element(static_cast<std::int64_t>(i)), q.element(static_cast<std::int64_t>(j)))));
        std::uint64_t bad = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t ij = static_cast<std::size_t>(table[i * n + j]);
                for (std::size_t k = 0; k < n; ++k)
                    if (table[ij * n + k] != table[i * n + static_cast<std::size_t>(table[j * n + k])])
                        ++bad;
            }
        rep.associativity_triples = static_cast<std::uint64_t>(n) * n * n;
        if (bad > 0)
            fail(std::to_string(bad) + " non-associative triples");
    } else {
        for (std::uint64_t i = 0; i < options.samples; ++i) {
            PcElement x = q.random_element(rng), y = q.random_element(rng), z = q.random_element(rng);
            ++rep.associativity_triples;
            if (q.mul(q.mul(x, y), z) != q.mul(x, q.mul(y, z)))
                fail("associativity fails at (" + q.to_string(x) + ", " + q.to_string(y) + ", " + q.to_string(z) +
                     ")");
        }
    }
    return rep;
}

} // namespace nilforge
