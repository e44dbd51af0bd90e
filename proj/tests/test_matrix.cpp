#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

#include <gafsym/matrix.hpp>
#include <gafsym/parallel.hpp>
#include <gafsym/rng.hpp>

using namespace gafsym;

namespace
{

double jacobi_norm(const CMatrix &m)
{
    return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
}

} // namespace

TEST(Rng, StreamsAreReproducibleAndDistinct)
{
    RngStream a(7, 3);
    RngStream b(7, 3);
    RngStream c(7, 4);
    RngStream d(8, 3);
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
    EXPECT_NE(x, d.next_u64());
    EXPECT_NE(RngStream(7, 3).split(0).next_u64(), RngStream(7, 3).split(1).next_u64());
}

TEST(Rng, ComplexGaussianHasUnitSecondMoment)
{
    RngStream rng(1, 0);
    const int n = 200000;
    double m2 = 0.0;
    double m4 = 0.0;
    std::complex<double> m = 0.0;
    std::complex<double> pseudo = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto g = rng.complex_gaussian();
        m += g;
        m2 += std::norm(g);
        m4 += std::norm(g) * std::norm(g);
        pseudo += g * g;
    }
    m /= n;
    m2 /= n;
    m4 /= n;
    pseudo /= n;
    const double se = std::sqrt((m4 - m2 * m2) / n);
    EXPECT_LT(std::abs(m2 - 1.0), 5.0 * se);
    EXPECT_LT(std::abs(m), 5.0 / std::sqrt(n));
    EXPECT_LT(std::abs(pseudo), 5.0 / std::sqrt(n));
}

TEST(Matrix, OperatorNormAgreesWithJacobiSvd)
{
    RngStream rng(2, 0);
    for (int n : {1, 3, 17, 64}) {
        const CMatrix g = ginibre(n, n, rng);
        EXPECT_NEAR(operator_norm(g), jacobi_norm(g), 1e-12 * jacobi_norm(g)) << n;
    }
    const CMatrix rect = ginibre(5, 9, rng);
    EXPECT_NEAR(operator_norm(rect), jacobi_norm(rect), 1e-12 * jacobi_norm(rect));
    CMatrix diag = CMatrix::Zero(4, 4);
    diag.diagonal() << 0.5, -3.0, std::complex<double>(0.0, 2.0), 1.0;
    EXPECT_NEAR(operator_norm(diag), 3.0, 1e-15);
}

TEST(Matrix, OperatorNormRejectsNonFinite)
{
    CMatrix m = CMatrix::Identity(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(operator_norm(m), precondition_error);
}

TEST(Matrix, ContractionCertificate)
{
    const CMatrix twice = 2.0 * CMatrix::Identity(3, 3);
    EXPECT_THROW(ContractionMatrix::certified(twice), precondition_error);
    const ContractionMatrix loose(twice);
    EXPECT_FALSE(loose.is_contraction());
    EXPECT_NEAR(loose.norm_certificate(), 2.0, 1e-15);
    const CMatrix edge = (1.0 + 0.5 * contraction_slack) * CMatrix::Identity(3, 3);
    EXPECT_NO_THROW(ContractionMatrix::certified(edge));
}

TEST(Matrix, PsdSqrtSquaresBack)
{
    RngStream rng(2, 1);
    const CMatrix g = ginibre(12, 12, rng);
    const CMatrix p = g * g.adjoint();
    const CMatrix s = psd_sqrt(p);
    EXPECT_LT((s * s - p).cwiseAbs().maxCoeff(), 1e-12 * p.cwiseAbs().maxCoeff());
    EXPECT_LT((s - s.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_THROW(psd_sqrt(g), precondition_error);
}

TEST(Matrix, DefectCompletesContraction)
{
    RngStream rng(2, 2);
    const ContractionMatrix a = random_contraction(10, ContractionKind::ginibre_scaled, rng);
    const CMatrix d = defect(a);
    const CMatrix lhs = d * d + a.entries().adjoint() * a.entries();
    EXPECT_LT((lhs - CMatrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(defect(CMatrix(2.0 * CMatrix::Identity(2, 2))), precondition_error);
}

TEST(Matrix, PsdCheck)
{
    CMatrix m = CMatrix::Identity(3, 3);
    EXPECT_TRUE(psd_check(m, 0.0).psd);
    m(2, 2) = -1e-3;
    const PsdResult r = psd_check(m, 1e-8);
    EXPECT_FALSE(r.psd);
    EXPECT_NEAR(r.min_eigenvalue, -1e-3, 1e-15);
}

TEST(Matrix, HaarUnitaryIsUnitary)
{
    RngStream rng(2, 3);
    const CMatrix u = haar_unitary(32, rng);
    EXPECT_LT((u.adjoint() * u - CMatrix::Identity(32, 32)).cwiseAbs().maxCoeff(), 1e-13);
}

// Eigenphases of Haar unitaries are marginally uniform on the circle.
TEST(Matrix, HaarEigenphasesPassChiSquare)
{
    RngStream rng(2, 4);
    const int bins = 16;
    std::vector<int> counts(bins, 0);
    int total = 0;
    for (int s = 0; s < 1500; ++s) {
        const CMatrix u = haar_unitary(8, rng);
        Eigen::ComplexEigenSolver<CMatrix> eig(u, false);
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
            const double t = std::arg(eig.eigenvalues()(i)) + std::numbers::pi;
            counts[std::min(bins - 1, static_cast<int>(t / (2.0 * std::numbers::pi) * bins))]++;
            ++total;
        }
    }
    const double expected = static_cast<double>(total) / bins;
    double chi2 = 0.0;
    for (int c : counts) {
        chi2 += (c - expected) * (c - expected) / expected;
    }
    // 15 degrees of freedom, p = 0.001.
    EXPECT_LT(chi2, 37.70);
}

TEST(Matrix, RandomContractionsHaveNormAtMostOne)
{
    RngStream rng(2, 5);
    for (auto kind : {ContractionKind::ginibre_scaled, ContractionKind::partial_isometry, ContractionKind::unitary}) {
        for (int t = 0; t < 5; ++t) {
            const ContractionMatrix a = random_contraction(20, kind, rng);
            EXPECT_LE(jacobi_norm(a.entries()), 1.0 + 1e-12);
            EXPECT_TRUE(a.is_contraction());
        }
    }
}

TEST(Matrix, RandomPermutationIsBijection)
{
    RngStream rng(2, 6);
    const auto p = random_permutation(50, rng);
    const std::set<int> values(p.begin(), p.end());
    EXPECT_EQ(values.size(), 50u);
    EXPECT_EQ(*values.begin(), 0);
    EXPECT_EQ(*values.rbegin(), 49);
}

TEST(Parallel, ResultsInIndexOrderAndErrorsPropagate)
{
    const auto out = parallel_map(100, [](std::size_t i) { return static_cast<int>(i * i); }, 4);
    for (std::size_t i = 0; i < out.size(); ++i) {
        EXPECT_EQ(out[i], static_cast<int>(i * i));
    }
    EXPECT_THROW(parallel_map(10, [](std::size_t i) -> int {
                     if (i == 7) {
                         throw std::runtime_error("boom");
                     }
                     return 0;
                 }, 3),
                 std::runtime_error);
}
