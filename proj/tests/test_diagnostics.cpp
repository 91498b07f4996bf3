#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "rrqr/diagnostics.hpp"
#include "rrqr/genmat.hpp"
#include "rrqr/qrcp.hpp"

using namespace rrqr;

namespace {

Matrix<double> diag(std::initializer_list<double> d)
{
    Matrix<double> D(d.size(), d.size());
    std::size_t i = 0;
    for (double v : d) {
        D(i, i) = v;
        ++i;
    }
    return D;
}

// Random Gaussian columns scaled by 10^(-j/4): well conditioned after column
// scaling, but with norms spread over 15 decades.
Matrix<double> graded(std::size_t n, std::uint64_t seed)
{
    auto G = random_gaussian<double>(n, n, seed);
    for (std::size_t j = 0; j < n; ++j)
        for (auto& v : G.col(j))
            v *= std::pow(10.0, -0.25 * static_cast<double>(j));
    return G;
}

StrategyConfig exact_with_wrong_column()
{
    StrategyConfig cfg;
    cfg.kind = StrategyKind::ExactRecompute;
    cfg.inject.wrong_column = WrongColumnRecompute{-1};
    return cfg;
}

} // namespace

TEST(CheckStructure, IdentityPassesWithEquality)
{
    const auto rep = check_structure(Matrix<double>::identity(4));
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.red_line, (std::vector<double>{1, 1, 1, 1}));
    EXPECT_EQ(rep.blue_line, (std::vector<double>{1, 1, 1, 0}));
    EXPECT_EQ(rep.worst_monotone_ratio, 1.0);
    EXPECT_EQ(rep.numerical_rank, 4u);
    EXPECT_EQ(rep.slack, 100 * 4 * epsilon<double>());
}

TEST(CheckStructure, IncreasingDiagonalViolatesMonotonicity)
{
    const auto rep = check_structure(diag({1, 2}));
    EXPECT_FALSE(rep.monotone_ok);
    // ||R(0:1, 1)|| = 2 > |R_00| as well
    EXPECT_FALSE(rep.dominance_ok);
    ASSERT_EQ(rep.violations.size(), 2u);
    EXPECT_EQ(rep.violations[0], (StructureViolation{0, 1, 2.0}));
    EXPECT_EQ(rep.violations[1], (StructureViolation{0, 1, 2.0}));
    EXPECT_EQ(rep.worst_monotone_ratio, 2.0);
}

TEST(CheckStructure, DominanceFamilyIncludesInnerRows)
{
    // column 2 is dominated at row 0 but not at row 1: ||R(1:2, 2)|| = 5 > 4
    const Matrix<double> R{{10, 0, 0}, {0, 4, 3}, {0, 0, 4}};
    const auto rep = check_structure(R);
    EXPECT_FALSE(rep.dominance_ok);
    EXPECT_EQ(rep.worst_dominance_ratio, 1.25);
    EXPECT_EQ(rep.blue_line[1], 5.0);
    EXPECT_EQ(rep.blue_line[0], 5.0);
    EXPECT_EQ(rep.worst_monotone_ratio, 1.0);
}

TEST(CheckStructure, SlackIsMultiplicative)
{
    const auto R = diag({1, 1.001});
    EXPECT_FALSE(check_structure(R, 1e-4).ok());
    EXPECT_TRUE(check_structure(R, 1e-3 + 1e-12).ok());
    EXPECT_THROW(check_structure(R, -1.0), std::invalid_argument);
}

TEST(CheckStructure, RejectsNonTriangular)
{
    const Matrix<double> A{{1, 0}, {1e-300, 1}};
    EXPECT_THROW(check_structure(A), std::invalid_argument);
}

TEST(CheckStructure, ZeroDiagonalFollowsRatioConvention)
{
    const auto rep = check_structure(diag({1, 0, 0}));
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.numerical_rank, 1u);
    const Matrix<double> R{{1, 0, 0}, {0, 0, 1}, {0, 0, 1}};
    EXPECT_EQ(check_structure(R).worst_dominance_ratio, std::numeric_limits<double>::infinity());
}

// Tail of a robust factor of a rank-deficient matrix after gradual underflow:
// 297 and 312 units of the smallest subnormal.
TEST(CheckStructure, SubnormalMagnitudesCompareAsZero)
{
    const double unit = std::numeric_limits<double>::denorm_min();
    const Matrix<double> R{{1e-300, 1e-300, 1e-300}, {0, 297 * unit, 312 * unit}, {0, 0, 15 * unit}};
    const auto rep = check_structure(R);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.red_line[1], 297 * unit);
    EXPECT_EQ(rep.blue_line[1], 312 * unit);

    // a normal entry above a subnormal pivot is still a violation
    const Matrix<double> S{{1, 1}, {0, 297 * unit}};
    const Matrix<double> T{{297 * unit, 1e-300}, {0, 0}};
    EXPECT_TRUE(check_structure(S).ok());
    EXPECT_FALSE(check_structure(T).dominance_ok);

    const float funit = std::numeric_limits<float>::denorm_min();
    EXPECT_TRUE(check_structure(Matrix<float>{{297 * funit, 312 * funit}, {0, 0}}).ok());
    EXPECT_FALSE(check_structure(Matrix<double>{{297.0 * funit, 312.0 * funit}, {0, 0}}).ok());
}

TEST(CheckStructure, KahanAlreadyHasTheStructure)
{
    for (std::size_t n : {2u, 10u, 100u, 400u, 1000u})
        for (double c : {0.1, 0.5, 0.9}) {
            const auto rep = check_structure(kahan<double>({n, c}), n * epsilon<double>());
            EXPECT_TRUE(rep.ok()) << "n=" << n << " c=" << c;
        }
}

TEST(CheckStructure, BlueLineBoundedByTrailingColumnNorm)
{
    const auto R = extract_r(factorize(random_gaussian<double>(30, 30, 2), StrategyConfig{}));
    const auto rep = check_structure(R);
    for (std::size_t i = 0; i + 1 < 30; ++i) {
        double bound = 0;
        for (std::size_t j = i + 1; j < 30; ++j)
            bound = std::max(bound, column_norm(R, j));
        EXPECT_LE(rep.blue_line[i], bound * (1 + 30 * epsilon<double>()));
    }
}

TEST(CheckStructure, RobustFactorOfKahan700Passes)
{
    const auto R = extract_r(factorize(kahan<double>({700, 0.41800000000000004}), StrategyConfig{}));
    const auto rep = check_structure(R);
    EXPECT_TRUE(rep.monotone_ok);
    EXPECT_TRUE(rep.dominance_ok);
}

TEST(NumericalRank, Examples)
{
    EXPECT_EQ(numerical_rank(diag({1, 1e-20}), 1e-10), 1u);
    EXPECT_EQ(numerical_rank(Matrix<double>::identity(5), 0.999), 5u);
    EXPECT_EQ(numerical_rank(diag({1, .5, 1e-12, 1e-13}), 1e-8), 2u);
    EXPECT_EQ(numerical_rank(diag({0, 0}), 1e-8), 0u);
    EXPECT_THROW(numerical_rank(diag({1}), 1.0), std::invalid_argument);
    EXPECT_THROW(numerical_rank(diag({1}), 0.0), std::invalid_argument);
}

TEST(NumericalRank, ScaleInvariant)
{
    const auto R = extract_r(factorize(kahan<double>({90, 0.6}), StrategyConfig{}));
    const std::size_t r = numerical_rank(R, 1e-6);
    for (double s : {1e-100, 0.5, 3.0, 1e100}) {
        Matrix<double> S = R;
        for (auto& v : S.data())
            v *= s;
        EXPECT_EQ(numerical_rank(S, 1e-6), r);
    }
}

TEST(ResidualMetrics, TrivialCases)
{
    const auto I = Matrix<double>::identity(4);
    const auto m = residual_metrics(I, factorize(I, StrategyConfig{}));
    EXPECT_EQ(m.residual_rel, 0.0);
    EXPECT_LE(m.ortho, epsilon<double>());
    const Matrix<double> Z(3, 2);
    EXPECT_EQ(residual_metrics(Z, factorize(Z, StrategyConfig{})).residual_rel, 0.0);
}

TEST(ResidualMetrics, RandomTallMatrix)
{
    const auto A = random_gaussian<double>(50, 30, 6);
    const auto m = residual_metrics(A, factorize(A, StrategyConfig{}));
    EXPECT_LE(m.residual_rel, 50 * 50 * epsilon<double>());
    EXPECT_LE(m.ortho, 50 * 50 * epsilon<double>());
}

TEST(ResidualMetrics, DimensionMismatchIsRejected)
{
    const auto r = factorize(Matrix<double>::identity(3), StrategyConfig{});
    EXPECT_THROW(residual_metrics(Matrix<double>::identity(4), r), std::invalid_argument);
}

TEST(SingularValues, KnownSpectrum)
{
    const Matrix<double> A{{3, 0}, {4, 5}};
    // A^T A = [[25, 20], [20, 25]] -> sigma^2 = 45, 5
    const auto sv = singular_values(A);
    EXPECT_NEAR(sv[0], std::sqrt(45.0), 8 * epsilon<double>() * sv[0]);
    EXPECT_NEAR(sv[1], std::sqrt(5.0), 8 * epsilon<double>() * sv[0]);
    const Matrix<std::complex<double>> B{{{0, 2}, 0}, {0, {1, 1}}};
    const auto sb = singular_values(B);
    EXPECT_NEAR(sb[0], 2.0, 8 * epsilon<double>());
    EXPECT_NEAR(sb[1], std::sqrt(2.0), 8 * epsilon<double>());
}

TEST(RowScaledCondition, Examples)
{
    EXPECT_EQ(row_scaled_condition(Matrix<double>::identity(6)), 1.0);
    EXPECT_EQ(row_scaled_condition(diag({1, 1e-30})), 1.0);
    EXPECT_EQ(row_scaled_condition(diag({1, 0}), 1), 1.0);
    EXPECT_THROW(row_scaled_condition(diag({1, 0})), std::invalid_argument);
}

TEST(RowScaledCondition, PhaseInvariant)
{
    const auto A = random_gaussian<std::complex<double>>(12, 12, 19);
    auto R = extract_r(factorize(A, StrategyConfig{}));
    const double before = row_scaled_condition(R);
    for (std::size_t i = 0; i < 12; ++i) {
        const auto phase = std::polar(1.0, 0.7 * static_cast<double>(i));
        for (std::size_t j = i; j < 12; ++j)
            R(i, j) *= phase;
    }
    EXPECT_NEAR(row_scaled_condition(R), before, 1e-10 * before);
}

TEST(RowScaledCondition, RobustKahanIsModerate)
{
    const auto R = extract_r(factorize(kahan<double>({200, 0.5}), StrategyConfig{}));
    const double kappa = row_scaled_condition(R, numerical_rank(R, default_rank_tau<double>(200)));
    // 0.01 / sqrt(eps) ~ 6.7e5
    EXPECT_LT(kappa, 0.01 / std::sqrt(epsilon<double>()));
}

TEST(RowScaledCondition, InjectedFailureIsIllConditioned)
{
    const auto A = graded(60, 5);
    StrategyConfig exact;
    exact.kind = StrategyKind::ExactRecompute;
    const auto good = extract_r(factorize(A, exact));
    const auto bad = extract_r(factorize(A, exact_with_wrong_column()));
    EXPECT_TRUE(check_structure(good).ok());
    EXPECT_FALSE(check_structure(bad).ok());
    EXPECT_LT(row_scaled_condition(good), 100.0);
    EXPECT_GT(row_scaled_condition(bad), 1.0 / std::sqrt(epsilon<double>()));
}

TEST(FailurePrecondition, Examples)
{
    const auto fi = failure_precondition(Matrix<double>::identity(5));
    EXPECT_EQ(fi.kappa_c, 1.0);
    EXPECT_FALSE(fi.susceptible);

    // orthogonal Q from a factorization, columns rescaled
    const auto r = factorize(random_gaussian<double>(8, 8, 3), StrategyConfig{});
    auto Q = form_q(r);
    for (std::size_t j = 0; j < 8; ++j)
        for (auto& v : Q.col(j))
            v *= std::pow(3.0, static_cast<double>(j));
    const auto fq = failure_precondition(Q);
    EXPECT_NEAR(fq.kappa_c, 1.0, 1e-13);
    EXPECT_FALSE(fq.susceptible);

    EXPECT_TRUE(failure_precondition(kahan<double>({100, 0.9})).susceptible);
    EXPECT_THROW(failure_precondition(Matrix<double>(2, 2)), std::invalid_argument);
}

TEST(ComparePivots, IdenticalResultsDoNotDiverge)
{
    const auto A = random_gaussian<double>(10, 10, 8);
    const auto a = factorize(A, StrategyConfig{});
    const auto d = compare_pivots(a, a, A);
    EXPECT_FALSE(d.diverged);
}

TEST(ComparePivots, RobustAgreesWithOracleOnRandom)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto A = random_gaussian<double>(20, 20, seed);
        StrategyConfig exact;
        exact.kind = StrategyKind::ExactRecompute;
        const auto d = compare_pivots(factorize(A, StrategyConfig{}), factorize(A, exact), A);
        if (d.diverged) {
            EXPECT_LT(d.relative_gap, 100 * epsilon<double>()) << "seed " << seed;
        }
    }
}

TEST(ComparePivots, ReportsDivergenceStepAndGap)
{
    const auto A = graded(60, 5);
    StrategyConfig exact;
    exact.kind = StrategyKind::ExactRecompute;
    const auto good = factorize(A, exact);
    const auto bad = factorize(A, exact_with_wrong_column());
    const auto d = compare_pivots(good, bad, A);
    ASSERT_TRUE(d.diverged);
    EXPECT_EQ(good.perm[d.step], d.column_a);
    EXPECT_EQ(bad.perm[d.step], d.column_b);
    for (std::size_t k = 0; k < d.step; ++k)
        EXPECT_EQ(good.perm[k], bad.perm[k]);
    EXPECT_GT(d.norm_a, d.norm_b);
    EXPECT_GT(d.relative_gap, 0.01);
}

TEST(ComparePivots, ReplayMatchesFactorization)
{
    const auto A = random_gaussian<double>(15, 12, 4);
    StrategyConfig exact;
    exact.kind = StrategyKind::ExactRecompute;
    const auto r = factorize(A, exact);
    const auto norms = replay_trailing_norms(A, std::span<const std::size_t>(r.perm), 5);
    EXPECT_NEAR(norms[5], std::abs(r.factors(5, 5)), 64 * epsilon<double>() * norms[5]);
    for (std::size_t j = 6; j < 12; ++j)
        EXPECT_LE(norms[j], norms[5] * (1 + 64 * epsilon<double>()));
}
