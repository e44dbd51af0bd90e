#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <gafsym/rng.hpp>
#include <gafsym/series.hpp>

using namespace gafsym;

namespace
{

PowerSeries1 random_series(int order, RngStream &rng, double decay = 0.7)
{
    std::vector<cplx> c(static_cast<std::size_t>(order) + 1);
    double scale = 1.0;
    for (auto &x : c) {
        x = scale * rng.complex_gaussian();
        scale *= decay;
    }
    return PowerSeries1(order, std::move(c));
}

PowerSeries2 random_series2(int order, RngStream &rng, double decay = 0.6)
{
    return PowerSeries2::generate(order, [&](int j, int k) { return std::pow(decay, j + k) * rng.complex_gaussian(); });
}

// exp via the power sum sum_k f^k / k!, for f with zero constant term.
PowerSeries1 exp_power_sum(const PowerSeries1 &f)
{
    PowerSeries1 term = PowerSeries1::monomial(f.order(), 0);
    PowerSeries1 acc = term;
    for (int k = 1; k <= f.order(); ++k) {
        term = cplx{1.0 / k} * (term * f);
        acc = acc + term;
    }
    return acc;
}

} // namespace

TEST(PowerSeries1, RejectsNegativeOrderAndShortCoefficientLists)
{
    EXPECT_THROW(PowerSeries1(-1), precondition_error);
    EXPECT_THROW(PowerSeries1(3, std::vector<cplx>(2)), precondition_error);
}

TEST(PowerSeries1, HornerMatchesDirectPowerSum)
{
    RngStream rng(11, 0);
    const PowerSeries1 f = random_series(20, rng);
    const cplx z{0.31, -0.47};
    cplx direct = 0.0;
    for (int j = 0; j <= 20; ++j) {
        direct += f[j] * std::pow(z, j);
    }
    EXPECT_LT(std::abs(f(z) - direct), 1e-14);
}

TEST(PowerSeries1, ProductIsTruncatedConvolution)
{
    RngStream rng(11, 1);
    const PowerSeries1 a = random_series(12, rng);
    const PowerSeries1 b = random_series(9, rng);
    const PowerSeries1 c = a * b;
    ASSERT_EQ(c.order(), 9);
    for (int n = 0; n <= 9; ++n) {
        cplx s = 0.0;
        for (int i = 0; i <= n; ++i) {
            s += a[i] * b[n - i];
        }
        EXPECT_LT(std::abs(c[n] - s), 1e-14);
    }
}

TEST(PowerSeries1, ExpAgreesWithPowerSumOracle)
{
    RngStream rng(11, 2);
    std::vector<cplx> c(16);
    for (int j = 1; j < 16; ++j) {
        c[j] = rng.complex_gaussian() * std::pow(0.5, j);
    }
    const PowerSeries1 f(15, c);
    const PowerSeries1 e = exp(f);
    const PowerSeries1 oracle = exp_power_sum(f);
    EXPECT_LT((e - oracle).max_abs(), 1e-13);
}

TEST(PowerSeries1, LogOfOnePlusZ)
{
    std::vector<cplx> c(31, cplx{0.0});
    c[0] = 1.0;
    c[1] = 1.0;
    const PowerSeries1 l = log(PowerSeries1(30, c));
    for (int k = 1; k <= 30; ++k) {
        EXPECT_NEAR(l[k].real(), (k % 2 ? 1.0 : -1.0) / k, 1e-15);
        EXPECT_EQ(l[k].imag(), 0.0);
    }
}

TEST(PowerSeries1, LogExpRoundTrip)
{
    RngStream rng(11, 3);
    PowerSeries1 f = random_series(24, rng, 0.5);
    std::vector<cplx> c(f.coeffs().begin(), f.coeffs().end());
    c[0] = 0.0;
    f = PowerSeries1(24, c);
    EXPECT_LT((log(exp(f)) - f).max_abs(), 1e-13);
}

TEST(PowerSeries1, LogRejectsBadConstantTerm)
{
    EXPECT_THROW(log(PowerSeries1::monomial(4, 1)), precondition_error);
    EXPECT_THROW(log(PowerSeries1::monomial(4, 0, 2.0)), precondition_error);
}

TEST(PowerSeries1, ReciprocalInvertsProduct)
{
    RngStream rng(11, 4);
    PowerSeries1 a = random_series(18, rng);
    std::vector<cplx> c(a.coeffs().begin(), a.coeffs().end());
    c[0] = {2.0, 0.5};
    a = PowerSeries1(18, c);
    const PowerSeries1 one = a * reciprocal(a);
    EXPECT_LT((one - PowerSeries1::monomial(18, 0)).max_abs(), 1e-14);
    EXPECT_THROW(reciprocal(PowerSeries1::monomial(3, 1)), precondition_error);
}

TEST(PowerSeries1, DerivativeLowersOrder)
{
    const PowerSeries1 f(3, {1.0, 2.0, 3.0, 4.0});
    const PowerSeries1 d = derivative(f);
    ASSERT_EQ(d.order(), 2);
    EXPECT_EQ(d[0], cplx(2.0));
    EXPECT_EQ(d[1], cplx(6.0));
    EXPECT_EQ(d[2], cplx(12.0));
}

TEST(PowerSeries2, TotalDegreeTruncationHoldsZeros)
{
    const PowerSeries2 f = PowerSeries2::generate(4, [](int, int) { return cplx{1.0}; });
    EXPECT_EQ(f(2, 2), cplx(1.0));
    EXPECT_EQ(f(3, 2), cplx(0.0));
    EXPECT_EQ(f(4, 4), cplx(0.0));
}

TEST(PowerSeries2, SymmetryFlagIsChecked)
{
    const auto mono = [](int a, int b) {
        return [a, b](int j, int k) { return (j == a && k == b) ? cplx{1.0} : cplx{0.0}; };
    };
    EXPECT_THROW(PowerSeries2::generate(3, mono(1, 2), true), precondition_error);
    EXPECT_NO_THROW(PowerSeries2::generate(3, mono(1, 1), true));
    EXPECT_TRUE(PowerSeries2::generate(3, mono(1, 1), true).symmetric_flag());
}

TEST(PowerSeries2, EvaluationMatchesDoubleSum)
{
    RngStream rng(12, 0);
    const PowerSeries2 f = random_series2(10, rng);
    const cplx z{0.2, 0.1};
    const cplx w{-0.3, 0.25};
    cplx s = 0.0;
    for (int j = 0; j <= 10; ++j) {
        for (int k = 0; j + k <= 10; ++k) {
            s += f(j, k) * std::pow(z, j) * std::pow(w, k);
        }
    }
    EXPECT_LT(std::abs(f(z, w) - s), 1e-14);
}

TEST(PowerSeries2, ExpOfSeparableSumFactors)
{
    RngStream rng(12, 1);
    auto zero_const = [](PowerSeries1 p) {
        std::vector<cplx> c(p.coeffs().begin(), p.coeffs().end());
        c[0] = 0.0;
        return PowerSeries1(p.order(), c);
    };
    const PowerSeries1 a = zero_const(random_series(12, rng, 0.5));
    const PowerSeries1 b = zero_const(random_series(12, rng, 0.5));
    const PowerSeries2 lhs = exp(PowerSeries2::lift_z(a) + PowerSeries2::lift_w(b));
    const PowerSeries2 rhs = PowerSeries2::lift_z(exp(a)) * PowerSeries2::lift_w(exp(b));
    EXPECT_LT((lhs - rhs).max_abs(), 1e-13);
}

TEST(PowerSeries2, LogOfOneMinusZW)
{
    const int n = 20;
    PowerSeries2 f = PowerSeries2::monomial(n, 0, 0) - PowerSeries2::monomial(n, 1, 1);
    const PowerSeries2 l = log(f);
    for (int j = 0; j <= n; ++j) {
        for (int k = 0; j + k <= n; ++k) {
            const cplx expect = (j == k && j > 0) ? cplx(-1.0 / j) : cplx(0.0);
            EXPECT_LT(std::abs(l(j, k) - expect), 1e-15) << j << "," << k;
        }
    }
}

TEST(PowerSeries2, LogExpRoundTrip)
{
    RngStream rng(12, 2);
    PowerSeries2 f = random_series2(14, rng, 0.4);
    f = f - PowerSeries2::monomial(14, 0, 0, f(0, 0));
    EXPECT_LT((log(exp(f)) - f).max_abs(), 1e-13);
}

TEST(PowerSeries2, DividedDifferenceEvaluatesQuotient)
{
    RngStream rng(12, 3);
    const PowerSeries1 p = random_series(16, rng, 0.6);
    const PowerSeries2 dd = divided_difference(p);
    EXPECT_EQ(dd.order(), 15);
    EXPECT_TRUE(dd.is_symmetric(0.0));
    // Polynomial of degree 16 makes the quotient an exact polynomial of degree 15.
    const cplx z{0.4, 0.1};
    const cplx w{-0.2, 0.3};
    EXPECT_LT(std::abs(dd(z, w) - (p(z) - p(w)) / (z - w)), 1e-13);
    // On the diagonal the quotient is the derivative.
    EXPECT_LT((diagonal(dd) - derivative(p)).max_abs(), 1e-14);
}

TEST(PowerSeries2, DivisionInvertsMultiplication)
{
    RngStream rng(12, 4);
    const PowerSeries2 f = random_series2(10, rng);
    for (Factor fac : {Factor::z, Factor::w, Factor::z_minus_w}) {
        const PowerSeries2 g = multiply_by_factor(f, fac);
        EXPECT_EQ(g.order(), 11);
        EXPECT_LT((divide_by_factor(g, fac) - f).max_abs(), 1e-14);
    }
}

TEST(PowerSeries2, DivisionRejectsNonDivisibleInput)
{
    const PowerSeries2 f = PowerSeries2::monomial(4, 0, 0) + PowerSeries2::monomial(4, 1, 0);
    EXPECT_THROW(divide_by_factor(f, Factor::z), precondition_error);
    EXPECT_THROW(divide_by_factor(PowerSeries2::monomial(4, 1, 1), Factor::z_minus_w), precondition_error);
    EXPECT_NO_THROW(divide_by_factor(PowerSeries2::monomial(4, 1, 0) - PowerSeries2::monomial(4, 0, 1),
                                     Factor::z_minus_w));
}

TEST(PowerSeries2, ShiftMultipliesByMonomial)
{
    RngStream rng(12, 5);
    const PowerSeries2 f = random_series2(6, rng);
    const PowerSeries2 g = shift(f, 2, 1);
    const cplx z{0.3, 0.2};
    const cplx w{0.1, -0.4};
    EXPECT_LT(std::abs(g(z, w) - z * z * w * f(z, w)), 1e-14);
}

TEST(PowerSeries2, PartialDerivatives)
{
    const PowerSeries2 f = PowerSeries2::monomial(6, 2, 3, 5.0);
    EXPECT_EQ(derivative(f, Var::z)(1, 3), cplx(10.0));
    EXPECT_EQ(derivative(f, Var::w)(2, 2), cplx(15.0));
}
