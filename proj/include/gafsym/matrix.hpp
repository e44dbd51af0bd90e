#ifndef GAFSYM_MATRIX_HPP
#define GAFSYM_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <gafsym/errors.hpp>
#include <gafsym/rng.hpp>

namespace gafsym
{

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Slack on the unit norm bound for "is a contraction".
inline constexpr double contraction_slack = 1e-9;
// Eigenvalues of a PSD input down to this value are clamped to zero.
inline constexpr double psd_clamp = -1e-10;

// Largest singular value.
inline double operator_norm(const CMatrix &m)
{
    detail::require(m.allFinite(), "operator_norm: non-finite entries");
    if (m.size() == 0) {
        return 0.0;
    }
    // Top eigenvalue of the smaller Gram matrix. (BDCSVD in Eigen 3.4.0
    // returned 1.38 for a norm-1 product V A V^T; JacobiSVD is too slow at N = 256.)
    const CMatrix gram = m.rows() <= m.cols() ? CMatrix(m * m.adjoint()) : CMatrix(m.adjoint() * m);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

// Square complex matrix together with its computed operator norm.
class ContractionMatrix
{
public:
    ContractionMatrix() = default;

    explicit ContractionMatrix(CMatrix entries) : m_entries(std::move(entries)), m_norm(operator_norm(m_entries))
    {
        detail::require(m_entries.rows() == m_entries.cols(), "ContractionMatrix: matrix must be square");
    }

    // Throws unless the norm certificate is at most 1 + contraction_slack.
    static ContractionMatrix certified(CMatrix entries)
    {
        ContractionMatrix c(std::move(entries));
        if (!c.is_contraction()) {
            throw precondition_error("ContractionMatrix: operator norm " + std::to_string(c.m_norm)
                                     + " exceeds 1");
        }
        return c;
    }

    int dim() const
    {
        return static_cast<int>(m_entries.rows());
    }

    const CMatrix &entries() const
    {
        return m_entries;
    }

    double norm_certificate() const
    {
        return m_norm;
    }

    bool is_contraction() const
    {
        return m_norm <= 1.0 + contraction_slack;
    }

private:
    CMatrix m_entries;
    double m_norm = 0.0;
};

namespace detail
{

inline double hermitian_defect(const CMatrix &p)
{
    return (p - p.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace detail

// Hermitian square root of a positive semidefinite matrix. Eigenvalues in
// [psd_clamp, 0) are treated as zero.
inline CMatrix psd_sqrt(const CMatrix &p)
{
    detail::require(p.rows() == p.cols(), "psd_sqrt: matrix must be square");
    if (p.size() == 0) {
        return p;
    }
    const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    detail::require(detail::hermitian_defect(p) <= 1e-12 * scale, "psd_sqrt: matrix is not Hermitian");
    const CMatrix herm = 0.5 * (p + p.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
    const Eigen::VectorXd &lam = eig.eigenvalues();
    if (lam.minCoeff() < psd_clamp) {
        throw precondition_error("psd_sqrt: eigenvalue " + std::to_string(lam.minCoeff())
                                 + " is negative beyond the clamp");
    }
    const Eigen::VectorXd root = lam.cwiseMax(0.0).cwiseSqrt();
    const CMatrix &v = eig.eigenvectors();
    return v * root.cast<std::complex<double>>().asDiagonal() * v.adjoint();
}

// (I - A* A)^{1/2}. A may be rectangular; the result acts on A's domain.
inline CMatrix defect(const CMatrix &a)
{
    detail::require(operator_norm(a) <= 1.0 + contraction_slack, "defect: input is not a contraction");
    const auto n = a.cols();
    return psd_sqrt(CMatrix::Identity(n, n) - a.adjoint() * a);
}

inline CMatrix defect(const ContractionMatrix &a)
{
    detail::require(a.is_contraction(), "defect: input is not a contraction");
    const auto n = a.dim();
    return psd_sqrt(CMatrix::Identity(n, n) - a.entries().adjoint() * a.entries());
}

struct PsdResult {
    bool psd;
    double min_eigenvalue;
};

inline PsdResult psd_check(const CMatrix &m, double tol)
{
    detail::require(m.rows() == m.cols(), "psd_check: matrix must be square");
    detail::require(detail::hermitian_defect(m) <= tol, "psd_check: matrix is not Hermitian within tolerance");
    const CMatrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    return {lo >= -tol, lo};
}

// rows x cols matrix of i.i.d. standard complex Gaussians.
inline CMatrix ginibre(int rows, int cols, RngStream &rng)
{
    CMatrix g(rows, cols);
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
            g(r, c) = rng.complex_gaussian();
        }
    }
    return g;
}

inline CVector gaussian_vector(int n, RngStream &rng)
{
    CVector v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = rng.complex_gaussian();
    }
    return v;
}

// Haar unitary: QR of a Ginibre matrix with the phases of R's diagonal moved
// into Q.
inline CMatrix haar_unitary(int n, RngStream &rng)
{
    detail::require(n >= 1, "haar_unitary: n must be positive");
    const CMatrix g = ginibre(n, n, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix &r = qr.matrixQR();
    for (int i = 0; i < n; ++i) {
        const std::complex<double> d = r(i, i);
        const double a = std::abs(d);
        q.col(i) *= (a > 0.0 ? d / a : std::complex<double>{1.0});
    }
    return q;
}

enum class ContractionKind { ginibre_scaled, partial_isometry, unitary };

// Random contraction of the requested kind:
//   ginibre_scaled   - Ginibre matrix divided by its norm (norm exactly 1)
//   partial_isometry - Y* X with X, Y orthonormal n x r frames, r in [1, n]
//   unitary          - Haar unitary
inline ContractionMatrix random_contraction(int n, ContractionKind kind, RngStream &rng)
{
    detail::require(n >= 1, "random_contraction: n must be positive");
    switch (kind) {
    case ContractionKind::ginibre_scaled: {
        CMatrix g = ginibre(n, n, rng);
        g /= operator_norm(g);
        return ContractionMatrix(std::move(g));
    }
    case ContractionKind::partial_isometry: {
        const int r = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        const CMatrix x = haar_unitary(n, rng).leftCols(r);
        const CMatrix y = haar_unitary(n, rng).leftCols(r);
        return ContractionMatrix(y * x.adjoint());
    }
    case ContractionKind::unitary:
        break;
    }
    return ContractionMatrix(haar_unitary(n, rng));
}

// Uniform random permutation of {0, ..., n-1}.
inline std::vector<int> random_permutation(int n, RngStream &rng)
{
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        p[i] = i;
    }
    std::shuffle(p.begin(), p.end(), rng.engine());
    return p;
}

} // namespace gafsym

#endif
