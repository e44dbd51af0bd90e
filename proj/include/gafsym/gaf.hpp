#ifndef GAFSYM_GAF_HPP
#define GAFSYM_GAF_HPP

// Finite-truncation model of a jointly Gaussian pair (Phi, Psi) of D0-GAFs,
//   Phi(z) = sum_{j<=N} alpha_j z^j / sqrt(j),  Psi(z) = sum_{j<=N} beta_j z^j / sqrt(j).
//
// Index convention: the analytic coupling matrix Ca has Ca(k, j) = E alpha_j beta_k
// and the sesquianalytic matrix Cs has Cs(k, j) = E alpha_j conj(beta_k)
// (row k, column j, zero-based in storage). Symbols consume Ca untransposed.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <gafsym/errors.hpp>
#include <gafsym/matrix.hpp>
#include <gafsym/parallel.hpp>
#include <gafsym/report.hpp>
#include <gafsym/rng.hpp>
#include <gafsym/series.hpp>

namespace gafsym
{

enum class CouplingMode {
    independent,
    identical,
    conjugate_reflect,
    permutation,
    analytic_contraction,
    sesquianalytic_contraction
};

inline std::string to_string(CouplingMode m)
{
    switch (m) {
    case CouplingMode::independent:
        return "independent";
    case CouplingMode::identical:
        return "identical";
    case CouplingMode::conjugate_reflect:
        return "conjugate_reflect";
    case CouplingMode::permutation:
        return "permutation";
    case CouplingMode::analytic_contraction:
        return "analytic_contraction";
    case CouplingMode::sesquianalytic_contraction:
        return "sesquianalytic_contraction";
    }
    return "?";
}

class GafCoupling
{
public:
    static GafCoupling independent(int n)
    {
        return GafCoupling(n, CouplingMode::independent);
    }

    // beta = alpha.
    static GafCoupling identical(int n)
    {
        return GafCoupling(n, CouplingMode::identical);
    }

    // beta_j = conj(alpha_j), i.e. Psi(z) = conj(Phi(conj z)).
    static GafCoupling conjugate_reflect(int n)
    {
        return GafCoupling(n, CouplingMode::conjugate_reflect);
    }

    // beta_j = conj(alpha_{pi(j)}). pi[j-1] holds pi(j) in 1..N.
    static GafCoupling permutation(std::vector<int> pi)
    {
        const int n = static_cast<int>(pi.size());
        GafCoupling c(n, CouplingMode::permutation);
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        for (int v : pi) {
            detail::require(v >= 1 && v <= n && !seen[v - 1], "GafCoupling: permutation is not a bijection of 1..N");
            seen[v - 1] = 1;
        }
        c.m_perm = std::move(pi);
        return c;
    }

    // E alpha_j beta_k = C(k, j).
    static GafCoupling analytic(ContractionMatrix c)
    {
        detail::require(c.is_contraction(), "GafCoupling: analytic coupling matrix is not a contraction");
        GafCoupling g(c.dim(), CouplingMode::analytic_contraction);
        g.m_matrix = std::move(c);
        return g;
    }

    // E alpha_j conj(beta_k) = E(k, j).
    static GafCoupling sesquianalytic(ContractionMatrix e)
    {
        detail::require(e.is_contraction(), "GafCoupling: sesquianalytic coupling matrix is not a contraction");
        GafCoupling g(e.dim(), CouplingMode::sesquianalytic_contraction);
        g.m_matrix = std::move(e);
        return g;
    }

    int trunc() const
    {
        return m_n;
    }

    CouplingMode mode() const
    {
        return m_mode;
    }

    const std::vector<int> &perm() const
    {
        return m_perm;
    }

    const ContractionMatrix &matrix() const
    {
        return m_matrix;
    }

    // Dense Ca with Ca(k-1, j-1) = E alpha_j beta_k.
    CMatrix analytic_matrix() const
    {
        CMatrix a = CMatrix::Zero(m_n, m_n);
        switch (m_mode) {
        case CouplingMode::conjugate_reflect:
            a.setIdentity();
            break;
        case CouplingMode::permutation:
            for (int k = 1; k <= m_n; ++k) {
                a(k - 1, m_perm[k - 1] - 1) = 1.0;
            }
            break;
        case CouplingMode::analytic_contraction:
            a = m_matrix.entries();
            break;
        default:
            break;
        }
        return a;
    }

    // Dense Cs with Cs(k-1, j-1) = E alpha_j conj(beta_k).
    CMatrix sesqui_matrix() const
    {
        CMatrix s = CMatrix::Zero(m_n, m_n);
        if (m_mode == CouplingMode::identical) {
            s.setIdentity();
        } else if (m_mode == CouplingMode::sesquianalytic_contraction) {
            s = m_matrix.entries();
        }
        return s;
    }

private:
    GafCoupling(int n, CouplingMode mode) : m_n(n), m_mode(mode)
    {
        detail::require(n >= 1, "GafCoupling: truncation must be positive");
    }

    int m_n;
    CouplingMode m_mode;
    std::vector<int> m_perm;
    ContractionMatrix m_matrix;
};

// e_j(z) = z^j / sqrt(j), j = 1..n.
inline CVector basis_vector(cplx z, int n)
{
    CVector e(n);
    cplx p = 1.0;
    for (int j = 1; j <= n; ++j) {
        p *= z;
        e(j - 1) = p / std::sqrt(static_cast<double>(j));
    }
    return e;
}

// Variance of the dropped tail, sum_{j>N} |z|^{2j}/j, bounded by
// |z|^{2(N+1)} / ((N+1)(1-|z|^2)).
inline double tail_bound(cplx z, int n)
{
    const double s = std::norm(z);
    detail::require(s < 1.0, "tail_bound: point outside the unit disk");
    return std::pow(s, n + 1) / ((n + 1.0) * (1.0 - s));
}

// log 1/(1 - s) for the untruncated kernel on the diagonal.
inline double kernel_full(double s)
{
    return -std::log1p(-s);
}

// sum_{j<=N} (z conj w)^j / j, the truncated self-kernel E Phi(z) conj(Phi(w)).
inline cplx self_kernel(cplx z, cplx w, int n)
{
    const cplx u = z * std::conj(w);
    cplx p = 1.0;
    cplx acc = 0.0;
    for (int j = 1; j <= n; ++j) {
        p *= u;
        acc += p / static_cast<double>(j);
    }
    return acc;
}

// E Phi(z) Psi(w) as a bivariate series of order 2N; the coefficient of z^j w^k
// is (jk)^{-1/2} E alpha_j beta_k.
inline PowerSeries2 exact_analytic_correlation(const GafCoupling &c)
{
    const int n = c.trunc();
    const CMatrix a = c.analytic_matrix();
    return PowerSeries2::generate(2 * n, [&](int j, int k) {
        if (j < 1 || k < 1 || j > n || k > n) {
            return cplx{0.0};
        }
        return a(k - 1, j - 1) / std::sqrt(static_cast<double>(j) * k);
    });
}

// E Phi(z) conj(Psi(w)) as a series in (z, v) with v standing for conj(w).
inline PowerSeries2 exact_sesquianalytic_correlation(const GafCoupling &c)
{
    const int n = c.trunc();
    const CMatrix s = c.sesqui_matrix();
    return PowerSeries2::generate(2 * n, [&](int j, int k) {
        if (j < 1 || k < 1 || j > n || k > n) {
            return cplx{0.0};
        }
        return s(k - 1, j - 1) / std::sqrt(static_cast<double>(j) * k);
    });
}

// Pointwise correlation values without materializing the order-2N series.
class CorrelationEvaluator
{
public:
    explicit CorrelationEvaluator(const GafCoupling &c)
        : m_coupling(c), m_analytic(c.analytic_matrix()), m_sesqui(c.sesqui_matrix())
    {
    }

    int trunc() const
    {
        return m_coupling.trunc();
    }

    // E Phi(z) Psi(w) = e(w)^T Ca e(z).
    cplx analytic(cplx z, cplx w) const
    {
        const int n = trunc();
        switch (m_coupling.mode()) {
        case CouplingMode::independent:
        case CouplingMode::identical:
        case CouplingMode::sesquianalytic_contraction:
            return 0.0;
        case CouplingMode::conjugate_reflect:
            return self_kernel(z, std::conj(w), n);
        case CouplingMode::permutation: {
            const CVector ez = basis_vector(z, n);
            const CVector ew = basis_vector(w, n);
            cplx acc = 0.0;
            for (int k = 1; k <= n; ++k) {
                acc += ez(m_coupling.perm()[k - 1] - 1) * ew(k - 1);
            }
            return acc;
        }
        case CouplingMode::analytic_contraction:
            break;
        }
        return basis_vector(w, n).transpose() * m_analytic * basis_vector(z, n);
    }

    // E Phi(z) conj(Psi(w)) = conj(e(w))^T Cs e(z).
    cplx sesqui(cplx z, cplx w) const
    {
        const int n = trunc();
        switch (m_coupling.mode()) {
        case CouplingMode::identical:
            return self_kernel(z, w, n);
        case CouplingMode::sesquianalytic_contraction:
            return basis_vector(w, n).adjoint() * m_sesqui * basis_vector(z, n);
        default:
            return 0.0;
        }
    }

    // Diagonal coefficients Fhat(l) = sum_{j+k=l} (jk)^{-1/2} E alpha_j beta_k of
    // E Phi(z) Psi(z), for l = 0..2N.
    std::vector<cplx> analytic_diagonal() const
    {
        const int n = trunc();
        std::vector<cplx> f(static_cast<std::size_t>(2 * n) + 1, cplx{0.0});
        switch (m_coupling.mode()) {
        case CouplingMode::conjugate_reflect:
            for (int j = 1; j <= n; ++j) {
                f[2 * j] += 1.0 / static_cast<double>(j);
            }
            return f;
        case CouplingMode::permutation:
            for (int k = 1; k <= n; ++k) {
                const int j = m_coupling.perm()[k - 1];
                f[j + k] += 1.0 / std::sqrt(static_cast<double>(j) * k);
            }
            return f;
        case CouplingMode::analytic_contraction:
            for (int j = 1; j <= n; ++j) {
                for (int k = 1; k <= n; ++k) {
                    f[j + k] += m_analytic(k - 1, j - 1) / std::sqrt(static_cast<double>(j) * k);
                }
            }
            return f;
        default:
            return f;
        }
    }

    const CMatrix &analytic_matrix() const
    {
        return m_analytic;
    }

    const CMatrix &sesqui_matrix() const
    {
        return m_sesqui;
    }

private:
    GafCoupling m_coupling;
    CMatrix m_analytic;
    CMatrix m_sesqui;
};

// Draws (alpha, beta) with the coupling's covariance structure:
//   analytic:      beta = Ca conj(alpha) + D nu,        D = (I - Ca Ca*)^{1/2}
//   sesquianalytic: beta = conj(Cs) alpha + D nu,       D = (I - conj(Cs) Cs^T)^{1/2}
// with nu an independent standard complex Gaussian vector. The four
// covariance relations E alpha beta^T = Ca^T, E alpha beta^* = Cs^T,
// E beta beta^* = I, E beta beta^T = 0 follow.
class CouplingSampler
{
public:
    explicit CouplingSampler(const GafCoupling &c) : m_coupling(c)
    {
        const int n = c.trunc();
        if (c.mode() == CouplingMode::analytic_contraction) {
            m_mix = c.matrix().entries();
            m_defect = psd_sqrt(CMatrix::Identity(n, n) - m_mix * m_mix.adjoint());
        } else if (c.mode() == CouplingMode::sesquianalytic_contraction) {
            m_mix = c.matrix().entries().conjugate();
            m_defect = psd_sqrt(CMatrix::Identity(n, n) - m_mix * m_mix.adjoint());
        }
    }

    std::pair<CVector, CVector> draw(RngStream &rng) const
    {
        const int n = m_coupling.trunc();
        CVector alpha = gaussian_vector(n, rng);
        CVector beta;
        switch (m_coupling.mode()) {
        case CouplingMode::independent:
            beta = gaussian_vector(n, rng);
            break;
        case CouplingMode::identical:
            beta = alpha;
            break;
        case CouplingMode::conjugate_reflect:
            beta = alpha.conjugate();
            break;
        case CouplingMode::permutation:
            beta.resize(n);
            for (int k = 1; k <= n; ++k) {
                beta(k - 1) = std::conj(alpha(m_coupling.perm()[k - 1] - 1));
            }
            break;
        case CouplingMode::analytic_contraction:
            beta = m_mix * alpha.conjugate() + m_defect * gaussian_vector(n, rng);
            break;
        case CouplingMode::sesquianalytic_contraction:
            beta = m_mix * alpha + m_defect * gaussian_vector(n, rng);
            break;
        }
        return {std::move(alpha), std::move(beta)};
    }

private:
    GafCoupling m_coupling;
    CMatrix m_mix;
    CMatrix m_defect;
};

struct SamplePath {
    std::vector<cplx> points;
    std::vector<cplx> values_phi;
    std::vector<cplx> values_psi;
    int trunc = 0;
    std::vector<double> tail_bound;
};

// Sample i uses the stream rng.split(i); results do not depend on threading.
inline std::vector<SamplePath> sample_pair(const GafCoupling &c, const std::vector<cplx> &points, int n_samples,
                                           const RngStream &rng)
{
    for (const auto &z : points) {
        detail::require(std::abs(z) < 1.0, "sample_pair: point outside the open unit disk");
    }
    detail::require(n_samples >= 0, "sample_pair: negative sample count");
    const int n = c.trunc();
    const CouplingSampler sampler(c);
    CMatrix basis(static_cast<Eigen::Index>(points.size()), n);
    std::vector<double> tails;
    for (std::size_t p = 0; p < points.size(); ++p) {
        basis.row(static_cast<Eigen::Index>(p)) = basis_vector(points[p], n).transpose();
        tails.push_back(tail_bound(points[p], n));
    }
    return parallel_map(static_cast<std::size_t>(n_samples), [&](std::size_t i) {
        RngStream stream = rng.split(i);
        const auto [alpha, beta] = sampler.draw(stream);
        const CVector phi = basis * alpha;
        const CVector psi = basis * beta;
        SamplePath s;
        s.points = points;
        s.values_phi.assign(phi.data(), phi.data() + phi.size());
        s.values_psi.assign(psi.data(), psi.data() + psi.size());
        s.trunc = n;
        s.tail_bound = tails;
        return s;
    });
}

enum class CorrelationKind { analytic, sesquianalytic };

// Per point-pair estimates; entry (p, q) refers to (points[p], points[q]).
struct CorrelationEstimate {
    CMatrix mean;
    Eigen::MatrixXd std_error;
};

// Mean of x_1..x_n with its delete-one jackknife standard error.
inline std::pair<cplx, double> jackknife_mean(const std::vector<cplx> &x)
{
    const auto n = static_cast<double>(x.size());
    detail::require(x.size() >= 2, "jackknife: at least two samples required");
    cplx total = 0.0;
    for (const auto &v : x) {
        total += v;
    }
    const cplx mean = total / n;
    double ss = 0.0;
    for (const auto &v : x) {
        const cplx loo = (total - v) / (n - 1.0);
        ss += std::norm(loo - mean);
    }
    return {mean, std::sqrt((n - 1.0) / n * ss)};
}

inline CorrelationEstimate empirical_correlation(const std::vector<SamplePath> &samples, CorrelationKind which)
{
    detail::require(samples.size() >= 2, "empirical_correlation: at least two samples required");
    const auto np = static_cast<Eigen::Index>(samples.front().points.size());
    CorrelationEstimate out{CMatrix(np, np), Eigen::MatrixXd(np, np)};
    std::vector<cplx> prod(samples.size());
    for (Eigen::Index p = 0; p < np; ++p) {
        for (Eigen::Index q = 0; q < np; ++q) {
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const cplx psi = samples[i].values_psi[q];
                prod[i] = samples[i].values_phi[p] * (which == CorrelationKind::analytic ? psi : std::conj(psi));
            }
            const auto [m, se] = jackknife_mean(prod);
            out.mean(p, q) = m;
            out.std_error(p, q) = se;
        }
    }
    return out;
}

namespace detail
{

// Entries of the covariance of X = (Phi(z), conj Phi(z), Psi(z), conj Psi(z),
// Phi(w), conj Phi(w), Psi(w), conj Psi(w)), i.e. G(a, b) = E X_a conj(X_b).
struct CovarianceModel {
    const CorrelationEvaluator &eval;
    double analytic_scale = 1.0;

    // E F(p) G(q) (no conjugation); field 0 = Phi, 1 = Psi.
    cplx plain(int f, cplx p, int g, cplx q) const
    {
        if (f == g) {
            return 0.0;
        }
        return analytic_scale * (f == 0 ? eval.analytic(p, q) : eval.analytic(q, p));
    }

    // E F(p) conj(G(q)).
    cplx mixed(int f, cplx p, int g, cplx q) const
    {
        if (f == g) {
            return self_kernel(p, q, eval.trunc());
        }
        return f == 0 ? eval.sesqui(p, q) : std::conj(eval.sesqui(q, p));
    }

    // E U conj(V) with U = F(p) or conj F(p), V = G(q) or conj G(q).
    cplx entry(int f, bool fbar, cplx p, int g, bool gbar, cplx q) const
    {
        if (!fbar && !gbar) {
            return mixed(f, p, g, q);
        }
        if (!fbar && gbar) {
            return plain(f, p, g, q);
        }
        if (fbar && !gbar) {
            return std::conj(plain(f, p, g, q));
        }
        return std::conj(mixed(f, p, g, q));
    }
};

} // namespace detail

// The 8x8 block matrix of 4x4 correlation blocks at (z, z), (z, w), (w, w).
// analytic_scale multiplies every analytic cross-correlation; values other
// than 1 produce a deliberately corrupted kernel.
inline CMatrix correlation_matrix_8x8(const GafCoupling &c, cplx z, cplx w, double analytic_scale = 1.0)
{
    const CorrelationEvaluator eval(c);
    const detail::CovarianceModel model{eval, analytic_scale};
    const cplx pts[2] = {z, w};
    CMatrix g(8, 8);
    for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 8; ++b) {
            g(a, b) = model.entry((a / 2) % 2, a % 2 == 1, pts[a / 4], (b / 2) % 2, b % 2 == 1, pts[b / 4]);
        }
    }
    return g;
}

inline constexpr double psd_tol = 1e-8;

inline BoundReport corr_matrix_psd_check(const GafCoupling &c, cplx z, cplx w, double analytic_scale = 1.0)
{
    detail::require(std::abs(z) < 1.0 && std::abs(w) < 1.0, "corr_matrix_psd_check: points must lie in the disk");
    BoundReport r("psd");
    r.params() = {{"mode", to_string(c.mode())}, {"trunc", c.trunc()}};
    const CMatrix g = correlation_matrix_8x8(c, z, w, analytic_scale);
    const PsdResult res = psd_check(g, psd_tol);
    r.add_ge("min_eigenvalue", res.min_eigenvalue, 0.0, psd_tol);
    return r;
}

// |E Phi(z) conj Psi(w)| + |E Phi(z) Psi(w)| <= sqrt(K(z,z) K(w,w)) with the
// untruncated kernel K = log 1/(1-|.|^2) on the right. The left side carries
// the slack sqrt(K(z)K(w)) - sqrt(K_N(z)K_N(w)) for the dropped tail.
inline BoundReport triangle_bound_check(const GafCoupling &c, const std::vector<std::pair<cplx, cplx>> &grid)
{
    BoundReport r("triangle");
    r.params() = {{"mode", to_string(c.mode())}, {"trunc", c.trunc()}};
    const CorrelationEvaluator eval(c);
    const int n = c.trunc();
    for (const auto &[z, w] : grid) {
        detail::require(std::abs(z) < 1.0 && std::abs(w) < 1.0, "triangle_bound_check: points must lie in the disk");
        const double kz = kernel_full(std::norm(z));
        const double kw = kernel_full(std::norm(w));
        const double kzn = self_kernel(z, z, n).real();
        const double kwn = self_kernel(w, w, n).real();
        const double rhs = std::sqrt(kz * kw);
        const double slack = rhs - std::sqrt(kzn * kwn);
        const double lhs = std::abs(eval.sesqui(z, w)) + std::abs(eval.analytic(z, w)) + slack;
        r.add_le("triangle(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ";"
                     + std::to_string(w.real()) + "," + std::to_string(w.imag()) + ")",
                 lhs, rhs, 1e-12 * std::max(1.0, rhs));
    }
    return r;
}

struct CueResult {
    std::vector<cplx> points;
    CMatrix sesqui_mean;   // E F(z_p) conj F(z_q)
    CMatrix analytic_mean; // E F(z_p) F(z_q)
    CMatrix target;        // log 1/(1 - z_p conj z_q)
    double max_sesqui_dev = 0.0;
    double max_analytic_dev = 0.0;
};

// F(z) = log det(I - z M*) for Haar M, as the sum of principal logs
// log(1 - z conj(lambda_i)) over the eigenvalues.
inline CueResult cue_log_char(int n, const std::vector<cplx> &points, int n_samples, const RngStream &rng)
{
    detail::require(n >= 2, "cue_log_char: n must be at least 2");
    detail::require(n_samples >= 1, "cue_log_char: at least one sample required");
    for (const auto &z : points) {
        detail::require(std::abs(z) <= 0.8, "cue_log_char: grid radius must not exceed 0.8");
    }
    const auto np = static_cast<Eigen::Index>(points.size());
    const auto values = parallel_map(static_cast<std::size_t>(n_samples), [&](std::size_t i) {
        RngStream stream = rng.split(i);
        const CMatrix u = haar_unitary(n, stream);
        Eigen::ComplexEigenSolver<CMatrix> eig(u, false);
        const CVector &lam = eig.eigenvalues();
        CVector f(np);
        for (Eigen::Index p = 0; p < np; ++p) {
            cplx acc = 0.0;
            for (Eigen::Index k = 0; k < lam.size(); ++k) {
                acc += std::log(1.0 - points[p] * std::conj(lam(k)));
            }
            f(p) = acc;
        }
        return f;
    });
    CueResult out;
    out.points = points;
    out.sesqui_mean = CMatrix::Zero(np, np);
    out.analytic_mean = CMatrix::Zero(np, np);
    out.target = CMatrix(np, np);
    for (const auto &f : values) {
        out.sesqui_mean += f * f.adjoint();
        out.analytic_mean += f * f.transpose();
    }
    out.sesqui_mean /= static_cast<double>(n_samples);
    out.analytic_mean /= static_cast<double>(n_samples);
    for (Eigen::Index p = 0; p < np; ++p) {
        for (Eigen::Index q = 0; q < np; ++q) {
            out.target(p, q) = -std::log(1.0 - points[p] * std::conj(points[q]));
        }
    }
    out.max_sesqui_dev = (out.sesqui_mean - out.target).cwiseAbs().maxCoeff();
    out.max_analytic_dev = out.analytic_mean.cwiseAbs().maxCoeff();
    return out;
}

} // namespace gafsym

#endif
