#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include <gafsym/gaf.hpp>

using namespace gafsym;

namespace
{

std::vector<std::pair<std::string, GafCoupling>> all_modes(int n, RngStream &rng)
{
    std::vector<int> pi(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        pi[j - 1] = n + 1 - j;
    }
    return {{"independent", GafCoupling::independent(n)},
            {"identical", GafCoupling::identical(n)},
            {"conjugate_reflect", GafCoupling::conjugate_reflect(n)},
            {"permutation", GafCoupling::permutation(pi)},
            {"analytic", GafCoupling::analytic(random_contraction(n, ContractionKind::ginibre_scaled, rng))},
            {"sesquianalytic",
             GafCoupling::sesquianalytic(random_contraction(n, ContractionKind::partial_isometry, rng))}};
}

} // namespace

TEST(Gaf, CouplingRejectsInvalidInputs)
{
    EXPECT_THROW(GafCoupling::independent(0), precondition_error);
    EXPECT_THROW(GafCoupling::permutation({1, 1, 3}), precondition_error);
    EXPECT_THROW(GafCoupling::permutation({0, 1}), precondition_error);
    EXPECT_THROW(GafCoupling::analytic(ContractionMatrix(CMatrix(2.0 * CMatrix::Identity(2, 2)))),
                 precondition_error);
}

TEST(Gaf, TailBoundDominatesTail)
{
    for (double r : {0.3, 0.7, 0.95}) {
        const cplx z = std::polar(r, 0.4);
        for (int n : {4, 16, 64}) {
            double tail = 0.0;
            for (int j = n + 1; j < 20000; ++j) {
                tail += std::pow(r * r, j) / j;
            }
            EXPECT_GE(tail_bound(z, n), tail);
            EXPECT_NEAR(self_kernel(z, z, n).real() + tail, kernel_full(r * r), 1e-12);
        }
    }
}

TEST(Gaf, EvaluatorMatchesExactSeries)
{
    RngStream rng(3, 0);
    const int n = 7;
    const cplx z{0.3, -0.4};
    const cplx w{-0.5, 0.2};
    for (const auto &[name, c] : all_modes(n, rng)) {
        const CorrelationEvaluator eval(c);
        const PowerSeries2 a = exact_analytic_correlation(c);
        const PowerSeries2 s = exact_sesquianalytic_correlation(c);
        EXPECT_LT(std::abs(eval.analytic(z, w) - a(z, w)), 1e-14) << name;
        EXPECT_LT(std::abs(eval.sesqui(z, w) - s(z, std::conj(w))), 1e-14) << name;
        const PowerSeries1 diag = diagonal(a);
        const auto fhat = eval.analytic_diagonal();
        ASSERT_EQ(fhat.size(), static_cast<std::size_t>(2 * n + 1));
        for (int l = 0; l <= 2 * n; ++l) {
            EXPECT_LT(std::abs(fhat[l] - diag[l]), 1e-14) << name << " l=" << l;
        }
    }
}

TEST(Gaf, ConjugateReflectIsKernelAtConjugate)
{
    const GafCoupling c = GafCoupling::conjugate_reflect(30);
    const CorrelationEvaluator eval(c);
    const cplx z{0.2, 0.5};
    const cplx w{0.6, -0.1};
    EXPECT_LT(std::abs(eval.analytic(z, w) - self_kernel(z, std::conj(w), 30)), 1e-15);
    EXPECT_EQ(eval.sesqui(z, w), cplx(0.0));
}

// Sample covariances of (alpha, beta) against Ca, Cs, and the normalization
// E beta beta^* = I, E beta beta^T = 0.
TEST(Gaf, SamplerReproducesCoefficientCovariances)
{
    RngStream rng(3, 1);
    const int n = 4;
    const int draws = 40000;
    for (const auto &[name, c] : all_modes(n, rng)) {
        const CouplingSampler sampler(c);
        const CMatrix ca = c.analytic_matrix();
        const CMatrix cs = c.sesqui_matrix();
        RngStream s(3, 100);
        std::vector<std::vector<cplx>> xa(n * n), xs(n * n), bb(n * n), bbt(n * n);
        for (int i = 0; i < draws; ++i) {
            const auto [alpha, beta] = sampler.draw(s);
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    xa[j * n + k].push_back(alpha(j) * beta(k));
                    xs[j * n + k].push_back(alpha(j) * std::conj(beta(k)));
                    bb[j * n + k].push_back(beta(j) * std::conj(beta(k)));
                    bbt[j * n + k].push_back(beta(j) * beta(k));
                }
            }
        }
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const auto check = [&](const std::vector<cplx> &x, cplx target, const char *what) {
                    const auto [m, se] = jackknife_mean(x);
                    EXPECT_LE(std::abs(m - target), 5.0 * se + 1e-12)
                        << name << " " << what << " (" << j << "," << k << ")";
                };
                check(xa[j * n + k], ca(k, j), "E alpha beta");
                check(xs[j * n + k], cs(k, j), "E alpha conj beta");
                check(bb[j * n + k], j == k ? 1.0 : 0.0, "E beta conj beta");
                check(bbt[j * n + k], 0.0, "E beta beta");
            }
        }
    }
}

TEST(Gaf, SamplePathsMatchPointCorrelations)
{
    RngStream rng(3, 2);
    const GafCoupling c = GafCoupling::analytic(random_contraction(8, ContractionKind::unitary, rng));
    const std::vector<cplx> pts{{0.2, 0.1}, {-0.5, 0.3}, {0.0, 0.6}};
    const auto samples = sample_pair(c, pts, 20000, RngStream(3, 3));
    const CorrelationEvaluator eval(c);
    const auto an = empirical_correlation(samples, CorrelationKind::analytic);
    const auto se = empirical_correlation(samples, CorrelationKind::sesquianalytic);
    for (std::size_t p = 0; p < pts.size(); ++p) {
        for (std::size_t q = 0; q < pts.size(); ++q) {
            EXPECT_LE(std::abs(an.mean(p, q) - eval.analytic(pts[p], pts[q])), 5.0 * an.std_error(p, q));
            EXPECT_LE(std::abs(se.mean(p, q) - eval.sesqui(pts[p], pts[q])), 5.0 * se.std_error(p, q) + 1e-12);
        }
    }
}

TEST(Gaf, SamplingIsDeterministic)
{
    const GafCoupling c = GafCoupling::identical(5);
    const std::vector<cplx> pts{{0.1, 0.2}};
    const auto a = sample_pair(c, pts, 50, RngStream(9, 1));
    const auto b = sample_pair(c, pts, 50, RngStream(9, 1));
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].values_phi[0], b[i].values_phi[0]);
        EXPECT_EQ(a[i].values_psi[0], b[i].values_psi[0]);
    }
    EXPECT_THROW(sample_pair(c, {cplx{1.0, 0.0}}, 5, RngStream(9, 1)), precondition_error);
}

TEST(Gaf, CorrelationMatrixIsPsdAndTripledKernelIsNot)
{
    RngStream rng(3, 4);
    const std::vector<std::pair<cplx, cplx>> pairs{{{0.3, 0.0}, {0.5, 0.2}}, {{0.7, 0.1}, {-0.2, 0.6}},
                                                   {{0.85, 0.0}, {0.85, 0.01}}};
    for (const auto &[name, c] : all_modes(16, rng)) {
        for (const auto &[z, w] : pairs) {
            const CMatrix g = correlation_matrix_8x8(c, z, w);
            EXPECT_LT((g - g.adjoint()).cwiseAbs().maxCoeff(), 1e-14) << name;
            EXPECT_TRUE(corr_matrix_psd_check(c, z, w).all_pass()) << name;
        }
        EXPECT_TRUE(triangle_bound_check(c, pairs).all_pass()) << name;
    }
    const GafCoupling refl = GafCoupling::conjugate_reflect(16);
    EXPECT_FALSE(corr_matrix_psd_check(refl, {0.7, 0.1}, {-0.2, 0.6}, 3.0).all_pass());
}

TEST(Gaf, CueRejectsLargeRadius)
{
    EXPECT_THROW(cue_log_char(8, {cplx{0.9, 0.0}}, 10, RngStream(1, 1)), precondition_error);
}

// For Haar U of size n, E |tr U^k|^2 = min(k, n) and distinct powers are
// uncorrelated, so E F(z) conj F(w) = sum_k (z conj w)^k min(k, n) / k^2.
TEST(Gaf, CueSmallSampleAgreesWithExactMoments)
{
    const std::vector<cplx> pts{{0.3, 0.0}, {0.0, -0.4}};
    const int n = 6;
    const CueResult res = cue_log_char(n, pts, 4000, RngStream(5, 0));
    for (std::size_t p = 0; p < pts.size(); ++p) {
        for (std::size_t q = 0; q < pts.size(); ++q) {
            const cplx u = pts[p] * std::conj(pts[q]);
            cplx exact = 0.0;
            for (int k = 1; k < 200; ++k) {
                exact += std::pow(u, k) * static_cast<double>(std::min(k, n)) / (static_cast<double>(k) * k);
            }
            EXPECT_LT(std::abs(res.sesqui_mean(p, q) - exact), 0.02);
            EXPECT_LT(std::abs(res.analytic_mean(p, q)), 0.02);
        }
    }
}
