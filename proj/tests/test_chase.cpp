#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include <gafsym/bounds.hpp>
#include <gafsym/chase.hpp>
#include <gafsym/gaf.hpp>

using namespace gafsym;

namespace
{

// pi (I_{d/(d+1)}(1/2,1/2) - I_{1/(d+1)}(1/2,1/2))^2 / log d, via Boost.
double sigma2_oracle(int d)
{
    const double x = 1.0 / (d + 1.0);
    const double b = std::numbers::pi * (boost::math::ibeta(0.5, 0.5, 1.0 - x) - boost::math::ibeta(0.5, 0.5, x));
    return b * b / std::log(static_cast<double>(d));
}

bool is_power_of(std::int64_t x, int d)
{
    if (x < d) {
        return false;
    }
    while (x % d == 0) {
        x /= d;
    }
    return x == 1;
}

} // namespace

TEST(Chase, IntervalsTileAndMapIsInvolution)
{
    for (int d : {3, 4, 5, 7, 29}) {
        const int m_max = d == 29 ? 4 : 6;
        const ChasePermutation p(d, m_max);
        const auto map = p.map();
        ASSERT_EQ(static_cast<std::int64_t>(map.size()), p.n_max());
        std::set<std::int64_t> seen;
        for (std::int64_t j = 1; j <= p.n_max(); ++j) {
            const std::int64_t pj = map[static_cast<std::size_t>(j - 1)];
            ASSERT_GE(pj, 1);
            ASSERT_LE(pj, p.n_max());
            EXPECT_EQ(map[static_cast<std::size_t>(pj - 1)], j);
            EXPECT_TRUE(is_power_of(j + pj, d)) << d << " " << j;
            EXPECT_EQ(p.interval_of(j), p.interval_of(pj));
            EXPECT_EQ(p(j), pj);
            seen.insert(pj);
        }
        EXPECT_EQ(static_cast<std::int64_t>(seen.size()), p.n_max());
        EXPECT_EQ(p.intervals().front().lo, 1);
    }
}

TEST(Chase, RejectsBadParameters)
{
    EXPECT_THROW(ChasePermutation(2, 3), precondition_error);
    EXPECT_THROW(ChasePermutation(5, 0), precondition_error);
    EXPECT_THROW(ChasePermutation(29, 20), precondition_error);
    const ChasePermutation p(5, 3);
    EXPECT_THROW(p.interval_of(0), precondition_error);
    EXPECT_THROW(p.interval_of(p.n_max() + 1), precondition_error);
    EXPECT_THROW(sigma2_formula(2), precondition_error);
}

TEST(Chase, CouplingPermutationPadsWithIdentity)
{
    const ChasePermutation p(5, 4);
    const auto pi = p.coupling_permutation(100);
    EXPECT_EQ(p.complete_prefix(100), 20);
    for (int j = 1; j <= 100; ++j) {
        const int expect = j <= 20 ? static_cast<int>(p(j)) : j;
        EXPECT_EQ(pi[j - 1], expect) << j;
    }
    EXPECT_NO_THROW(GafCoupling::permutation(pi));
}

TEST(Chase, DiagonalSumsAgainstLongDouble)
{
    const ChasePermutation p(5, 7);
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= 7; ++m) {
        const auto &iv = p.interval(m);
        long double s = 0.0L;
        for (std::int64_t j = iv.lo; j <= iv.hi; ++j) {
            s += 1.0L / std::sqrt(static_cast<long double>(j) * static_cast<long double>(iv.power - j));
        }
        const DiagonalSum ds = diagonal_sum(p, m);
        EXPECT_NEAR(ds.sum, static_cast<double>(s), 1e-13) << m;
        EXPECT_LT(ds.error, prev) << m;
        prev = ds.error;
    }
}

TEST(Chase, AnalyticDiagonalSupportedOnPowers)
{
    const int d = 5;
    const ChasePermutation p(d, 4);
    const int n = static_cast<int>(p.n_max());
    const CorrelationEvaluator eval(GafCoupling::permutation(p.coupling_permutation(n)));
    const auto fhat = eval.analytic_diagonal();
    for (std::size_t l = 0; l < fhat.size(); ++l) {
        if (is_power_of(static_cast<std::int64_t>(l), d)) {
            int m = 0;
            for (std::size_t x = l; x > 1; x /= d) {
                ++m;
            }
            EXPECT_NEAR(fhat[l].real(), diagonal_sum(p, m).sum, 1e-13) << l;
        } else {
            EXPECT_EQ(fhat[l], cplx(0.0)) << l;
        }
    }
}

TEST(Chase, Sigma2FormulaAndArgmax)
{
    const double s29 = sigma2_formula(29);
    EXPECT_GE(s29, 1.7205);
    EXPECT_LE(s29, 1.7211);
    for (int d : {3, 10, 29, 30, 200}) {
        EXPECT_NEAR(sigma2_formula(d), sigma2_oracle(d), 1e-12) << d;
    }
    int best = 3;
    for (int d = 4; d <= 200; ++d) {
        if (sigma2_oracle(d) > sigma2_oracle(best)) {
            best = d;
        }
    }
    EXPECT_EQ(best, 29);
    EXPECT_EQ(sigma2_argmax(3, 200), 29);
    EXPECT_THROW(sigma2_argmax(10, 5), precondition_error);
}

// The series estimate is the circle mean of the permutation coupling.
TEST(Chase, SeriesEstimateMatchesCouplingCircleMean)
{
    const int d = 5;
    const ChasePermutation p(d, 4);
    const int n = static_cast<int>(p.n_max());
    const auto fhat = CorrelationEvaluator(GafCoupling::permutation(p.coupling_permutation(n))).analytic_diagonal();
    const double r = 0.99;
    const Sigma2Series est = sigma2_series_estimate(d, {0.0, r}, 4);
    EXPECT_EQ(est.ratio[0], 0.0);
    const double direct = weighted_square_sum(fhat, r * r) / kernel_full(r * r);
    EXPECT_NEAR(est.ratio[1], direct, 1e-12 * direct);
    EXPECT_THROW(sigma2_series_estimate(d, {0.9999}, 3), precondition_error);
}
