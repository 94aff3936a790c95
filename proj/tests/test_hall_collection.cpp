#include "nilforge/element.hpp"
#include "nilforge/series.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace nilforge;

namespace {

BasisPtr f23() { return builtin_basis("F23"); }
BasisPtr f32() { return builtin_basis("F32"); }

FreeNilElement el(const BasisPtr& b, std::initializer_list<long> e) { return FreeNilElement(b, e); }

GroupWord random_word(std::mt19937_64& rng, const NilpotentBasis& b, bool generators_only = false)
{
    std::uniform_int_distribution<int> len(0, 20), ex(-9, 9);
    std::uniform_int_distribution<std::size_t> sym(0, (generators_only ? b.rank() : b.size()) - 1);
    GroupWord w;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
        int e = ex(rng);
        if (e != 0)
            w.letters.push_back({sym(rng), e});
    }
    return w;
}

FreeNilElement random_element(std::mt19937_64& rng, const BasisPtr& b)
{
    return collect(b, random_word(rng, *b));
}

TruncatedSeries direct_series(const NilpotentBasis& b, const GroupWord& w)
{
    TruncatedSeries s = TruncatedSeries::one(b.rank(), b.nilpotency_class());
    for (const auto& l : w.letters)
        s = s * symbol_series(b, l.symbol).power(l.exponent);
    return s;
}

} // namespace

TEST(Basis, BuiltinShapes)
{
    auto b = f23();
    ASSERT_EQ(b->size(), 5u);
    std::vector<int> w;
    for (std::size_t i = 0; i < b->size(); ++i)
        w.push_back(b->weight(i));
    EXPECT_EQ(w, (std::vector<int>{1, 1, 2, 3, 3}));
    EXPECT_EQ(b->kind(3), SymbolKind::central);
    EXPECT_EQ(b->kind(4), SymbolKind::central);
    EXPECT_EQ(b->symbol(3).name, "[y,x,x]");

    auto c = f32();
    ASSERT_EQ(c->size(), 6u);
    w.clear();
    for (std::size_t i = 0; i < c->size(); ++i)
        w.push_back(c->weight(i));
    EXPECT_EQ(w, (std::vector<int>{1, 1, 1, 2, 2, 2}));
    for (std::size_t i = 3; i < 6; ++i)
        EXPECT_EQ(c->kind(i), SymbolKind::central);
}

TEST(Basis, ConjugationRules)
{
    auto b = f23();
    // c^x = c d and c^(x^-1) = c d^-1
    RuleVector cd{};
    cd[2] = 1;
    cd[3] = 1;
    EXPECT_EQ(b->conjugate(2, 0, false), cd);
    cd[3] = -1;
    EXPECT_EQ(b->conjugate(2, 0, true), cd);
    // y^x = y c, y^(x^-1) = y c^-1 d
    RuleVector yc{};
    yc[1] = 1;
    yc[2] = 1;
    EXPECT_EQ(b->conjugate(1, 0, false), yc);
    yc[2] = -1;
    yc[3] = 1;
    EXPECT_EQ(b->conjugate(1, 0, true), yc);
    EXPECT_TRUE(b->commutes(4, 0));
    EXPECT_TRUE(b->commutes(3, 2));
}

TEST(Basis, UnknownNameAndBadShapes)
{
    EXPECT_THROW(builtin_basis("F44"), std::invalid_argument);
    EXPECT_THROW(NilpotentBasis::create("bad", 2, 4, {{"x", 1, {}}, {"y", 1, {}}}), std::invalid_argument);
    // [z,y] missing from a rank-3 class-2 basis
    EXPECT_THROW(NilpotentBasis::create("bad", 3, 2,
                                        {{"x", 1, {}},
                                         {"y", 1, {}},
                                         {"z", 1, {}},
                                         {"[y,x]", 2, std::pair<std::size_t, std::size_t>{1, 0}},
                                         {"[z,x]", 2, std::pair<std::size_t, std::size_t>{2, 0}}}),
                 std::invalid_argument);
}

TEST(Collect, Examples)
{
    auto b = f23();
    EXPECT_TRUE(collect(b, GroupWord{}).is_identity());
    EXPECT_EQ(collect(b, GroupWord{{{1, 1}, {0, 1}}}), el(b, {1, 1, 1, 0, 0}));
    // fixture from the independent series oracle
    EXPECT_EQ(collect(b, GroupWord{{{0, 1}, {1, 1}, {0, 1}, {1, 1}}}), el(b, {2, 2, 1, 0, 1}));
}

TEST(Collect, LargeExponentsStayExact)
{
    auto b = f23();
    Integer big("123456789012345678901234567890");
    GroupWord w{{{1, big}, {0, big}}};
    FreeNilElement a = collect(b, w);
    EXPECT_EQ(magnus_embed(a), direct_series(*b, w));
    EXPECT_EQ(a[2], big * big);
}

TEST(Arithmetic, Examples)
{
    auto b = f23();
    auto x = FreeNilElement::symbol(b, 0), y = FreeNilElement::symbol(b, 1);
    EXPECT_EQ(power(x, 2) * power(x, 3), power(x, 5));
    EXPECT_EQ(commutator(y, x), el(b, {0, 0, 1, 0, 0}));
    EXPECT_EQ(power(x * y, 2), el(b, {2, 2, 1, 0, 1}));
    EXPECT_THROW(multiply(x, FreeNilElement::symbol(f32(), 0)), std::invalid_argument);
}

TEST(Arithmetic, PowerNegative)
{
    auto b = f23();
    auto a = el(b, {3, -2, 5, 1, -7});
    EXPECT_EQ(power(a, -3) * power(a, 3), FreeNilElement(b));
    EXPECT_EQ(power(a, -1), inverse(a));
}

TEST(ApplyEndo, Examples)
{
    auto b = f23();
    auto x = FreeNilElement::symbol(b, 0), y = FreeNilElement::symbol(b, 1);
    std::vector<FreeNilElement> id{x, y};
    auto a = el(b, {4, -1, 2, 9, -3});
    EXPECT_EQ(apply_endo(id, a), a);

    std::vector<FreeNilElement> flip{x, inverse(y)};
    // [y^-1, x] = c^-1 e (series oracle fixture)
    EXPECT_EQ(apply_endo(flip, el(b, {0, 0, 1, 0, 0})), el(b, {0, 0, -1, 0, 1}));
    EXPECT_EQ(apply_endo(flip, el(b, {0, 0, 0, 1, 0})), el(b, {0, 0, 0, -1, 0}));

    auto c = f32();
    for (long r : {2L, 3L, -4L}) {
        std::vector<FreeNilElement> scale;
        for (std::size_t i = 0; i < 3; ++i)
            scale.push_back(FreeNilElement::symbol(c, i, r));
        EXPECT_EQ(apply_endo(scale, FreeNilElement::symbol(c, 3)), FreeNilElement::symbol(c, 3, r * r));
    }
    EXPECT_THROW(apply_endo(std::vector<FreeNilElement>{x}, a), std::invalid_argument);
}

TEST(Abelianization, Examples)
{
    auto c = f32();
    std::vector<FreeNilElement> id;
    for (std::size_t i = 0; i < 3; ++i)
        id.push_back(FreeNilElement::symbol(c, i));
    EXPECT_EQ(abelianization_matrix(id), IntMatrix::identity(3));
    EXPECT_EQ(abelianization_matrix(id).determinant(), 1);

    std::vector<FreeNilElement> scale;
    for (std::size_t i = 0; i < 3; ++i)
        scale.push_back(FreeNilElement::symbol(c, i, 5));
    EXPECT_EQ(abelianization_matrix(scale).determinant(), 125);

    auto x = id[0], y = id[1], z = id[2];
    std::vector<FreeNilElement> uni{x, x * y, y * z};
    IntMatrix m = abelianization_matrix(uni);
    EXPECT_EQ(m.determinant(), 1);
    EXPECT_EQ(m(0, 1), 1);
    EXPECT_EQ(m(1, 2), 1);
    EXPECT_EQ(m(1, 0), 0);
}

TEST(Magnus, Examples)
{
    auto b = f23();
    EXPECT_EQ(magnus_embed(FreeNilElement(b)), TruncatedSeries::one(2, 3));
    EXPECT_EQ(magnus_embed(FreeNilElement::symbol(b, 0)), TruncatedSeries::generator(2, 3, 0));

    // [y,x] -> 1 + YX - XY + XXY - XYX + YXY - YYX (direct expansion fixture)
    TruncatedSeries expect = TruncatedSeries::one(2, 3);
    using M = std::vector<std::size_t>;
    expect.coefficient(M{1, 0}) = 1;
    expect.coefficient(M{0, 1}) = -1;
    expect.coefficient(M{0, 0, 1}) = 1;
    expect.coefficient(M{0, 1, 0}) = -1;
    expect.coefficient(M{1, 0, 1}) = 1;
    expect.coefficient(M{1, 1, 0}) = -1;
    EXPECT_EQ(magnus_embed(FreeNilElement::symbol(b, 2)), expect);
    std::vector<std::string> names{"X", "Y"};
    EXPECT_EQ(expect.to_string(names), "1 - XY + YX + XXY - XYX + YXY - YYX");
}

TEST(Magnus, InjectiveOnSmallBox)
{
    auto b = f23();
    std::set<std::string> seen;
    std::vector<std::string> names{"X", "Y"};
    int count = 0;
    for (long i = -1; i <= 1; ++i)
        for (long j = -1; j <= 1; ++j)
            for (long k = -1; k <= 1; ++k)
                for (long l = -1; l <= 1; ++l)
                    for (long m = -1; m <= 1; ++m) {
                        seen.insert(magnus_embed(el(b, {i, j, k, l, m})).to_string(names));
                        ++count;
                    }
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(count));
}

class CollectionProperties : public ::testing::TestWithParam<const char*> {};

TEST_P(CollectionProperties, OracleEquivalence)
{
    auto b = builtin_basis(GetParam());
    std::mt19937_64 rng(20261015);
    for (int it = 0; it < 10000; ++it) {
        GroupWord w = random_word(rng, *b);
        ASSERT_EQ(magnus_embed(collect(b, w)), direct_series(*b, w)) << "iteration " << it;
    }
}

TEST_P(CollectionProperties, GroupAxioms)
{
    auto b = builtin_basis(GetParam());
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> small(-12, 12);
    FreeNilElement id(b);
    for (int it = 0; it < 10000; ++it) {
        auto a = random_element(rng, b), c = random_element(rng, b), d = random_element(rng, b);
        ASSERT_EQ((a * c) * d, a * (c * d));
        ASSERT_EQ(inverse(a) * a, id);
        Integer m = small(rng), n = small(rng);
        ASSERT_EQ(power(a, m + n), power(a, m) * power(a, n));
    }
}

TEST_P(CollectionProperties, NormalFormIdempotence)
{
    auto b = builtin_basis(GetParam());
    std::mt19937_64 rng(11);
    for (int it = 0; it < 2000; ++it) {
        auto a = random_element(rng, b);
        ASSERT_EQ(collect(b, a.to_word()), a);
    }
}

TEST_P(CollectionProperties, TopWeightIsCentral)
{
    auto b = builtin_basis(GetParam());
    std::mt19937_64 rng(13);
    for (std::size_t s = 0; s < b->size(); ++s) {
        if (b->weight(s) != b->nilpotency_class())
            continue;
        for (int it = 0; it < 500; ++it) {
            auto a = random_element(rng, b);
            ASSERT_TRUE(commutator(FreeNilElement::symbol(b, s, 3), a).is_identity());
        }
    }
}

TEST_P(CollectionProperties, EndomorphismsAreMultiplicativeAndFunctorial)
{
    auto b = builtin_basis(GetParam());
    std::mt19937_64 rng(17);
    for (int it = 0; it < 300; ++it) {
        std::vector<FreeNilElement> f, g;
        for (std::size_t i = 0; i < b->rank(); ++i) {
            f.push_back(random_element(rng, b));
            g.push_back(random_element(rng, b));
        }
        auto a = random_element(rng, b), c = random_element(rng, b);
        ASSERT_EQ(apply_endo(f, a * c), apply_endo(f, a) * apply_endo(f, c));
        // matrix of f o g is M(f) M(g)
        std::vector<FreeNilElement> fg;
        for (const auto& gi : g)
            fg.push_back(apply_endo(f, gi));
        ASSERT_EQ(abelianization_matrix(fg), abelianization_matrix(f) * abelianization_matrix(g));
        ASSERT_EQ(apply_endo(fg, a), apply_endo(f, apply_endo(g, a)));
    }
}

INSTANTIATE_TEST_SUITE_P(Builtins, CollectionProperties, ::testing::Values("F23", "F32"));

TEST(Int64Collector, AgreesWithBigIntegers)
{
    auto b = f23();
    Collector<std::int64_t> fast(*b);
    Collector<Integer> exact(*b);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> ex(-30, 30);
    for (int it = 0; it < 2000; ++it) {
        Exponents<std::int64_t> a{}, c{};
        Exponents<Integer> ab{}, cb{};
        for (std::size_t s = 0; s < b->size(); ++s) {
            a[s] = ex(rng);
            c[s] = ex(rng);
            ab[s] = a[s];
            cb[s] = c[s];
        }
        fast.multiply(a, c);
        exact.multiply(ab, cb);
        for (std::size_t s = 0; s < b->size(); ++s)
            ASSERT_EQ(Integer(a[s]), ab[s]);
    }
}
