#include "nilforge/dh.hpp"

#include <gtest/gtest.h>

using namespace nilforge;

namespace {

FrattiniMatrix mat(std::int64_t p, std::vector<std::int64_t> a)
{
    return {p, 3, std::move(a)};
}

const DhFamily& family5()
{
    static DhFamily f(5);
    return f;
}

} // namespace

TEST(Structure, FunctorsCoincide)
{
    for (std::int64_t r : {1, 2}) {
        auto rep = verify_structure(family5(), r);
        EXPECT_TRUE(rep.passed) << r;
        EXPECT_EQ(rep.order, 15625);
        EXPECT_EQ(rep.center_order, 125);
        EXPECT_TRUE(rep.functors_equal);
    }
    DhFamily f7(7);
    auto rep = verify_structure(f7, 1);
    EXPECT_TRUE(rep.passed);
    EXPECT_EQ(rep.order, 117649);
    EXPECT_EQ(rep.center_order, 343);
}

TEST(Structure, RejectsBadParameters)
{
    EXPECT_THROW(DhFamily(4), std::invalid_argument);
    EXPECT_THROW(DhFamily(2), std::invalid_argument);
    EXPECT_THROW(family5().group(5), std::invalid_argument);
}

TEST(Scaling, Examples)
{
    auto two = scaling_isomorphism(family5(), 2);
    EXPECT_TRUE(two.passed);
    EXPECT_TRUE(two.well_defined);
    EXPECT_TRUE(two.bijective);
    EXPECT_EQ(two.matrix, mat(5, {2, 0, 0, 0, 2, 0, 0, 0, 2}));
    EXPECT_EQ(two.det, 3);

    auto one = scaling_isomorphism(family5(), 1);
    EXPECT_TRUE(one.passed);
    EXPECT_EQ(one.map.images, family5().group(1).generators());

    DhFamily f7(7);
    auto three = scaling_isomorphism(f7, 3);
    EXPECT_TRUE(three.passed);
    EXPECT_EQ(three.det, 6);
}

TEST(Cubic, Examples)
{
    EXPECT_TRUE(cubic_condition(5, 2));
    EXPECT_FALSE(cubic_condition(5, 1));
    for (std::int64_t r = 1; r < 7; ++r)
        EXPECT_FALSE(cubic_condition(7, r)) << r;
    EXPECT_EQ(find_valid_r(5), 2);
    EXPECT_EQ(find_valid_r(7), std::nullopt);
    EXPECT_EQ(find_valid_r(3), std::nullopt);
    EXPECT_EQ(find_valid_r(11), 2);
    EXPECT_EQ(find_valid_r(13), 2);
}

TEST(LiftSearch, IdentityParameters)
{
    auto res = matrix_lift_search(family5(), 1, 1, DetFilter::all);
    auto grp = lift_group_check(res);
    EXPECT_TRUE(grp.passed);
    EXPECT_TRUE(grp.p_power);
    EXPECT_EQ(grp.order, 5u);
    EXPECT_TRUE(grp.contains_unitriangular);
    EXPECT_TRUE(grp.all_det_one);
    EXPECT_EQ(res.det_residues, (std::set<std::int64_t>{1}));
    // |GL_3(5)| = 124 * 120 * 100 with the third column only tried after the first two pass
    EXPECT_EQ(res.pairs_examined, 124u * 120u);
}

TEST(LiftSearch, DeterminantObstruction)
{
    auto all = matrix_lift_search(family5(), 2, 1, DetFilter::all);
    ASSERT_FALSE(all.candidates.empty());
    EXPECT_EQ(all.det_residues, (std::set<std::int64_t>{3}));
    auto uni = matrix_lift_search(family5(), 2, 1, DetFilter::unimodular);
    EXPECT_TRUE(uni.candidates.empty());
    EXPECT_GT(uni.matrices_examined, 0u);
}

TEST(LiftSearch, ThreadCountDoesNotMatter)
{
    auto a = matrix_lift_search(family5(), 3, 2, DetFilter::all, 1);
    auto b = matrix_lift_search(family5(), 3, 2, DetFilter::all, 3);
    ASSERT_EQ(a.candidates.size(), b.candidates.size());
    for (std::size_t i = 0; i < a.candidates.size(); ++i)
        EXPECT_EQ(a.candidates[i].a, b.candidates[i].a);
}

TEST(LiftSearch, AgreesWithDirectCheck)
{
    auto res = matrix_lift_search(family5(), 2, 1, DetFilter::all);
    for (const auto& c : res.candidates)
        EXPECT_TRUE(lift_passes(family5(), 2, 1, c.a));
    EXPECT_FALSE(lift_passes(family5(), 2, 1, mat(5, {1, 0, 0, 0, 1, 0, 0, 0, 1})));
    EXPECT_THROW(matrix_lift_search(DhFamily(11), 1, 1, DetFilter::all), std::length_error);
}

TEST(LiftSearch, CompositionWithScaling)
{
    // scaling followed by any member of the (1,1) lift group has det r^3
    auto lift11 = matrix_lift_search(family5(), 1, 1, DetFilter::all);
    auto all21 = matrix_lift_search(family5(), 2, 1, DetFilter::all);
    auto scale = scaling_isomorphism(family5(), 2).matrix;
    std::set<std::vector<std::int64_t>> passing;
    for (const auto& c : all21.candidates)
        passing.insert(c.a.a);
    for (const auto& c : lift11.candidates) {
        auto comp = c.a * scale;
        EXPECT_EQ(comp.det(), 3);
        EXPECT_TRUE(passing.count(comp.a));
    }
    EXPECT_EQ(all21.candidates.size(), lift11.candidates.size());
}

TEST(CentralCorrections, DoNotChangeVerdicts)
{
    std::mt19937_64 rng(3);
    auto res = matrix_lift_search(family5(), 2, 3, DetFilter::all);
    auto rep = central_correction_check(family5(), res, 1000, rng);
    EXPECT_TRUE(rep.passed);
    EXPECT_EQ(rep.agreements, 1000u);
    EXPECT_GT(rep.passing_trials, 100u);
    EXPECT_LT(rep.passing_trials, 900u);
}

TEST(IntegerLift, DeterminantAndResidues)
{
    auto id = integer_lift(mat(5, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
    ASSERT_TRUE(id);
    EXPECT_EQ(*id, IntMatrix::identity(3));
    for (std::int64_t k : {2, 3, 4, 5, 6}) {
        auto m = mat(7, {k, 0, 0, 0, k, 0, 0, 0, k});
        if (m.det() != 1 && m.det() != 6)
            continue;
        auto b = integer_lift(m);
        ASSERT_TRUE(b) << k;
        Integer d = b->determinant();
        EXPECT_TRUE(d == 1 || d == -1);
        EXPECT_EQ(b->mod(7), m.a);
    }
    EXPECT_FALSE(integer_lift(mat(5, {2, 0, 0, 0, 2, 0, 0, 0, 2})));
}

TEST(OrbitDecision, PrimeFive)
{
    auto flip = dh_orbit_decision(family5(), 1, 4);
    EXPECT_TRUE(flip.decision);
    ASSERT_TRUE(flip.witness);
    EXPECT_EQ(flip.witness->det, 4);
    EXPECT_TRUE(flip.free_forward);
    EXPECT_TRUE(flip.free_backward);
    EXPECT_TRUE(flip.sound());

    auto no = dh_orbit_decision(family5(), 2, 1);
    EXPECT_FALSE(no.decision);
    EXPECT_EQ(no.unimodular_lifts, 0u);
    EXPECT_FALSE(no.contradiction);
    EXPECT_TRUE(no.sound());

    for (std::int64_t r = 1; r < 5; ++r) {
        auto same = dh_orbit_decision(family5(), r, r);
        ASSERT_TRUE(same.witness);
        EXPECT_EQ(same.witness->a, mat(5, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
        EXPECT_TRUE(same.sound());
    }
}

TEST(OrbitDecision, PrimeSevenConjugacy)
{
    // Every cube is +-1 mod 7, and M_1, M_2 turn out to be conjugate: the
    // search and the free-level check both find an automorphism.
    DhFamily f7(7);
    auto c = dh_orbit_decision(f7, 1, 2);
    EXPECT_FALSE(c.decision);
    EXPECT_EQ(c.unimodular_lifts, 7u);
    ASSERT_TRUE(c.integer_witness);
    Integer d = c.integer_witness->determinant();
    EXPECT_TRUE(d == 1 || d == -1);
    EXPECT_TRUE(c.free_forward);
    EXPECT_TRUE(c.free_backward);
    EXPECT_TRUE(c.contradiction);
    EXPECT_FALSE(c.sound());
}

TEST(OrbitDecision, UncertifiedPrimes)
{
    DhFamily f11(11);
    auto c = dh_orbit_decision(f11, 1, 2);
    EXPECT_FALSE(c.certified);
    EXPECT_FALSE(c.decision);
    EXPECT_TRUE(c.sound());
}

TEST(Characteristic, PrimeFive)
{
    auto lift11 = matrix_lift_search(family5(), 1, 1, DetFilter::all);
    auto rep = characteristic_check(family5(), lift11);
    EXPECT_TRUE(rep.passed);
    EXPECT_EQ(rep.central_generators, 9u);
    EXPECT_TRUE(rep.central_generators_verified);
    ASSERT_EQ(rep.subgroups.size(), 4u);
    EXPECT_EQ(rep.subgroups[0].name, "<G',x>");
    EXPECT_EQ(rep.subgroups[0].order, 625);
    EXPECT_EQ(rep.subgroups[0].moved_by, 0u);
    EXPECT_EQ(rep.subgroups[1].order, 3125);
    EXPECT_EQ(rep.subgroups[1].moved_by, 0u);
    // negative control
    EXPECT_EQ(rep.subgroups[2].name, "<G',y>");
    EXPECT_GT(rep.subgroups[2].moved_by, 0u);
    EXPECT_TRUE(rep.subgroups[2].passed);
    EXPECT_EQ(rep.subgroups[3].order, 15625);
    EXPECT_EQ(rep.subgroups[3].moved_by, 0u);

    auto r2 = matrix_lift_search(family5(), 2, 1, DetFilter::all);
    EXPECT_THROW(characteristic_check(family5(), r2), std::invalid_argument);
}
