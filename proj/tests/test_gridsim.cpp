#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "rrqr/genmat.hpp"
#include "rrqr/gridsim.hpp"

using namespace rrqr;

TEST(GridTopology, ParseAndValidate)
{
    const auto t = GridTopology::parse("6x4", 2, 3);
    EXPECT_EQ(t, (GridTopology{6, 4, 2, 3}));
    EXPECT_EQ(t.to_string(), "6x4 mb=2 nb=3");
    EXPECT_TRUE(GridTopology{}.sequential());
    EXPECT_THROW(GridTopology::parse("6", 1, 1), std::invalid_argument);
    EXPECT_THROW(GridTopology::parse("0x4", 1, 1), std::invalid_argument);
    EXPECT_THROW(GridTopology::parse("2x2x", 1, 1), std::invalid_argument);
    EXPECT_THROW(GridTopology::parse("2x2", 0, 1), std::invalid_argument);
}

TEST(DistributedNorm, ThreeFourFive)
{
    const std::vector<double> x{3, 4};
    for (auto topo : {GridTopology{1, 1, 1, 1}, GridTopology{2, 1, 1, 1}, GridTopology{5, 3, 2, 1}})
        EXPECT_NEAR(distributed_norm<double>(x, topo), 5.0, 4 * 5.0 * epsilon<double>());
}

TEST(DistributedNorm, SequentialGridIsBitIdentical)
{
    const auto A = random_gaussian<std::complex<float>>(97, 3, 6);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i0 : {0u, 5u, 96u})
            EXPECT_EQ(distributed_norm<std::complex<float>>(A.col(j, i0), GridTopology{1, 7, 3, 2}, i0),
                      column_norm(A, j, i0));
}

// Found by brute force over short vectors of ratios of small integers.
TEST(DistributedNorm, ReductionOrderChangesLastBit)
{
    const std::vector<float> x{0x1.ccccccp+0f, 0x1.8e38e4p-1f, 0x1p-1f, 0x1p-1f, 0x1p+0f, 0x1.8p-2f};
    const float two = distributed_norm<float>(x, GridTopology{2, 1, 1, 1});
    const float three = distributed_norm<float>(x, GridTopology{3, 1, 1, 1});
    EXPECT_EQ(two, 0x1.2bcadap+1f);
    EXPECT_EQ(three, 0x1.2bcad8p+1f);
    // 40-digit reference: 2.342127904395410789801824101710417838579
    const double ref = 2.342127904395410789801824101710417838579;
    EXPECT_LE(std::abs(two - ref), 4 * 6 * epsilon<float>() * ref);
    EXPECT_LE(std::abs(three - ref), 4 * 6 * epsilon<float>() * ref);
}

TEST(DistributedNorm, WithinBoundForEveryTopology)
{
    const auto A = random_gaussian<double>(200, 4, 10);
    for (int r = 1; r <= 7; ++r)
        for (int mb : {1, 2, 5}) {
            const GridTopology t{r, 1, mb, 1};
            for (std::size_t j = 0; j < 4; ++j) {
                const double ref = column_norm(A, j);
                const double got = distributed_norm<double>(A.col(j), t);
                EXPECT_LE(std::abs(got - ref), 4 * 200 * epsilon<double>() * ref);
                EXPECT_EQ(got, distributed_norm<double>(A.col(j), t));
            }
        }
}

TEST(DistributedNorm, BlockCyclicRowOffsetMatters)
{
    const std::vector<double> x{1e-8, 1, 1e8, 3};
    const GridTopology t{2, 1, 1, 1};
    // same values, different owners; both must still be accurate
    const double a = distributed_norm<double>(x, t, 0);
    const double b = distributed_norm<double>(x, t, 1);
    EXPECT_NEAR(a, b, 4 * epsilon<double>() * a);
}

TEST(DistributedArgmax, Examples)
{
    const std::vector<double> v{1, 2, 2};
    EXPECT_EQ(distributed_argmax<double>(v, GridTopology{}), 1u);
    const std::vector<double> eq(9, 0.5);
    EXPECT_EQ(distributed_argmax<double>(eq, GridTopology{}), 0u);
    EXPECT_EQ(distributed_argmax<double>(eq, GridTopology{1, 2, 1, 1}), 0u);
    // shifted window: value 2 lives in group 0, which wins every tie
    EXPECT_EQ(distributed_argmax<double>(eq, GridTopology{1, 3, 1, 1}, 1), 2u);
    const std::vector<double> none;
    EXPECT_THROW(distributed_argmax<double>(none, GridTopology{}), std::invalid_argument);
}

TEST(DistributedArgmax, TieRuleFollowsTree)
{
    // columns 0..3 dealt to groups 0,1,0,1 with nb=1; ties between groups go left
    const std::vector<double> v{1, 5, 5, 2};
    EXPECT_EQ(distributed_argmax<double>(v, GridTopology{1, 2, 1, 1}), 2u);
    EXPECT_EQ(distributed_argmax<double>(v, GridTopology{}), 1u);
    // with the window shifted by one column, the owners flip
    EXPECT_EQ(distributed_argmax<double>(v, GridTopology{1, 2, 1, 1}, 1), 1u);
}

TEST(DistributedArgmax, AgreesWithSequentialOnDistinctValues)
{
    const auto A = random_gaussian<double>(50, 1, 3);
    std::vector<double> v(A.col(0).begin(), A.col(0).end());
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best])
            best = i;
    for (int c = 1; c <= 6; ++c)
        EXPECT_EQ(distributed_argmax<double>(v, GridTopology{1, c, 1, 2}), best);
}
