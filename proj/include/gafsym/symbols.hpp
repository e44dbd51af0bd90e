#ifndef GAFSYM_SYMBOLS_HPP
#define GAFSYM_SYMBOLS_HPP

// Dirichlet operator symbols of matrices in the basis f_j(z) = sqrt(j) z^{j-1}
// of the Bergman space:
//   W[T](z, w) = sum_{j,k} e_j(z) e_k(w) m_{jk},   e_j(z) = z^j / sqrt(j),
// where m_{jk} = A(k, j) is read from the matrix untransposed (row k,
// column j), matching the analytic coupling convention of gaf.hpp.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <gafsym/errors.hpp>
#include <gafsym/gaf.hpp>
#include <gafsym/matrix.hpp>
#include <gafsym/report.hpp>
#include <gafsym/series.hpp>
#include <gafsym/special.hpp>

namespace gafsym
{

struct DirichletSymbol {
    CMatrix matrix;     // A, with m_{jk} = A(k-1, j-1)
    PowerSeries2 W;     // order 2N
    PowerSeries1 diag;  // diagonal restriction of W, order 2N
    double source_norm; // operator norm of A

    int dim() const
    {
        return static_cast<int>(matrix.rows());
    }

    // W(z, w) = e(w)^T A e(z), evaluated directly from the matrix.
    cplx operator()(cplx z, cplx w) const
    {
        return basis_vector(w, dim()).transpose() * matrix * basis_vector(z, dim());
    }

    cplx diagonal_value(cplx z) const
    {
        return (*this)(z, z);
    }
};

// Symbol of an arbitrary square matrix (no contraction requirement).
inline DirichletSymbol symbol_from_matrix(const CMatrix &a)
{
    detail::require(a.rows() == a.cols(), "symbol_from_matrix: matrix must be square");
    const int n = static_cast<int>(a.rows());
    PowerSeries2 w = PowerSeries2::generate(2 * n, [&](int j, int k) {
        if (j < 1 || k < 1 || j > n || k > n) {
            return cplx{0.0};
        }
        return a(k - 1, j - 1) / std::sqrt(static_cast<double>(j) * k);
    });
    PowerSeries1 d = diagonal(w);
    return {a, std::move(w), std::move(d), operator_norm(a)};
}

// Symbol of the leading N x N block of a contraction.
inline DirichletSymbol symbol_from_contraction(const ContractionMatrix &a, int n)
{
    detail::require(a.is_contraction(), "symbol_from_contraction: input is not a contraction");
    detail::require(n >= 1 && n <= a.dim(), "symbol_from_contraction: N must lie in 1..dim");
    DirichletSymbol s = symbol_from_matrix(a.entries().topLeftCorner(n, n));
    return s;
}

// Vanishing first row and column; diagonal equal to antidiagonal sums.
inline bool symbol_invariants_hold(const DirichletSymbol &s, double tol = 1e-14)
{
    const int n = s.W.order();
    for (int i = 0; i <= n; ++i) {
        if (std::abs(s.W(0, i)) > tol || std::abs(s.W(i, 0)) > tol) {
            return false;
        }
    }
    for (int l = 0; l <= n; ++l) {
        cplx acc = 0.0;
        for (int j = 0; j <= l; ++j) {
            acc += s.W(j, l - j);
        }
        if (std::abs(acc - s.diag[l]) > tol * std::max(1.0, std::abs(acc))) {
            return false;
        }
    }
    return true;
}

// A(k, j) = <x_j, y_k> = (Y* X)(k, j) for orthonormal column sets X, Y.
inline ContractionMatrix contraction_from_systems(const CMatrix &x, const CMatrix &y)
{
    detail::require(x.rows() == y.rows(), "contraction_from_systems: ambient dimensions differ");
    detail::require(x.cols() == y.cols(), "contraction_from_systems: systems must have equal length");
    const auto ortho_defect = [](const CMatrix &m) {
        return (m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
    };
    detail::require(ortho_defect(x) <= 1e-10, "contraction_from_systems: X is not orthonormal");
    detail::require(ortho_defect(y) <= 1e-10, "contraction_from_systems: Y is not orthonormal");
    return ContractionMatrix::certified(y.adjoint() * x);
}

// The analytic coupling whose correlation is the symbol of T.
inline GafCoupling coupling_from_contraction(const ContractionMatrix &t)
{
    detail::require(t.is_contraction(), "coupling_from_contraction: input is not a contraction");
    return GafCoupling::analytic(t);
}

// phi(z) = e^{i theta} (a - z) / (1 - conj(a) z). The identity map is
// a = 0, theta = pi.
class MobiusMap
{
public:
    MobiusMap(cplx a, double theta) : m_a(a), m_theta(theta)
    {
        detail::require(std::abs(a) < 1.0, "MobiusMap: |a| must be below 1");
    }

    static MobiusMap identity()
    {
        return {0.0, std::numbers::pi};
    }

    // z -> e^{i t} z.
    static MobiusMap rotation(double t)
    {
        return {0.0, t + std::numbers::pi};
    }

    cplx a() const
    {
        return m_a;
    }

    double theta() const
    {
        return m_theta;
    }

    cplx phase() const
    {
        return std::polar(1.0, m_theta);
    }

    cplx operator()(cplx z) const
    {
        return phase() * (m_a - z) / (1.0 - std::conj(m_a) * z);
    }

    cplx derivative(cplx z) const
    {
        const cplx d = 1.0 - std::conj(m_a) * z;
        return phase() * (std::norm(m_a) - 1.0) / (d * d);
    }

    // Inverse map w -> (a - e^{-i theta} w) / (1 - conj(a) e^{-i theta} w).
    cplx inverse(cplx w) const
    {
        const cplx u = std::conj(phase()) * w;
        return (m_a - u) / (1.0 - std::conj(m_a) * u);
    }

    // Taylor series to the given order.
    PowerSeries1 series(int order) const
    {
        std::vector<cplx> c(static_cast<std::size_t>(order) + 1, cplx{0.0});
        const cplx ab = std::conj(m_a);
        cplx p = 1.0; // conj(a)^k
        for (int k = 0; k <= order; ++k) {
            c[k] += phase() * m_a * p;
            if (k + 1 <= order) {
                c[k + 1] -= phase() * p;
            }
            p *= ab;
        }
        return PowerSeries1(order, std::move(c));
    }

    PowerSeries1 derivative_series(int order) const
    {
        std::vector<cplx> c(static_cast<std::size_t>(order) + 1);
        const cplx ab = std::conj(m_a);
        cplx p = 1.0;
        for (int k = 0; k <= order; ++k) {
            c[k] = phase() * (std::norm(m_a) - 1.0) * (k + 1.0) * p;
            p *= ab;
        }
        return PowerSeries1(order, std::move(c));
    }

    // (this o psi)(z) = this(psi(z)).
    MobiusMap compose(const MobiusMap &psi) const
    {
        const cplx zero = psi.inverse(m_a);
        const cplx d = derivative(psi(zero)) * psi.derivative(zero);
        const cplx ph = -(1.0 - std::norm(zero)) * d;
        return {zero, std::arg(ph)};
    }

private:
    cplx m_a;
    double m_theta;
};

// Matrix V with V(j-1, l-1) = [z^{j-1}](phi'(z) sqrt(l) phi(z)^{l-1}) / sqrt(j),
// j = 1..rows, l = 1..cols: the Bergman-space unitary f -> phi' (f o phi) in
// the f_j basis.
inline CMatrix mobius_basis_matrix(const MobiusMap &phi, int rows, int cols)
{
    const int order = rows - 1;
    const PowerSeries1 p = phi.series(order);
    const PowerSeries1 dp = phi.derivative_series(order);
    CMatrix v(rows, cols);
    PowerSeries1 power = PowerSeries1::monomial(order, 0);
    for (int l = 1; l <= cols; ++l) {
        const PowerSeries1 g = std::sqrt(static_cast<double>(l)) * (dp * power);
        for (int j = 1; j <= rows; ++j) {
            v(j - 1, l - 1) = g[j - 1] / std::sqrt(static_cast<double>(j));
        }
        power = power * p;
    }
    return v;
}

struct MobiusConjugate {
    ContractionMatrix t_phi; // M x M, at the working order
    double tail;             // bound on the effect of the dropped rows of V
    int working_order;
};

inline constexpr double mobius_tail_limit = 1e-6;

// T_phi = U_phi T conj(U_phi)* in the f_j basis: A_phi = V A V^T, with V
// truncated to M rows. The tail is tau (2 + tau), tau being the Frobenius
// norm of the rows M+1..4M of V.
inline MobiusConjugate mobius_conjugate(const ContractionMatrix &t, const MobiusMap &phi, int working_order)
{
    const int n = t.dim();
    detail::require(working_order >= 2 * n, "mobius_conjugate: working order must be at least 2 dim(T)");
    const int m = working_order;
    const CMatrix v_full = mobius_basis_matrix(phi, 4 * m, n);
    const double tau = v_full.bottomRows(3 * m).norm();
    const double tail = tau * (2.0 + tau);
    if (tail > mobius_tail_limit) {
        throw precondition_error("mobius_conjugate: truncation tail " + std::to_string(tail)
                                 + " exceeds the limit; increase the working order");
    }
    const CMatrix v = v_full.topRows(m);
    return {ContractionMatrix(v * t.entries() * v.transpose()), tail, m};
}

// Both sides of
//   diag W[T_phi](z) = diag W[T](phi z) - W[T](phi z, phi 0) - W[T](phi 0, phi z) + diag W[T](phi 0)
// at each point, and the norm comparison.
inline BoundReport verify_mobius_identity(const ContractionMatrix &t, const MobiusMap &phi,
                                          const std::vector<cplx> &points, int working_order)
{
    BoundReport r("mobius");
    r.params() = {{"dim", t.dim()},
                  {"a_re", phi.a().real()},
                  {"a_im", phi.a().imag()},
                  {"theta", phi.theta()},
                  {"working_order", working_order}};
    const MobiusConjugate mc = mobius_conjugate(t, phi, working_order);
    const DirichletSymbol lhs_sym = symbol_from_matrix(mc.t_phi.entries());
    const DirichletSymbol base = symbol_from_matrix(t.entries());
    const cplx p0 = phi(0.0);
    double worst = 0.0;
    double worst_tail = 0.0;
    for (const cplx z : points) {
        detail::require(std::abs(z) < 1.0, "verify_mobius_identity: point outside the disk");
        const cplx pz = phi(z);
        const cplx lhs = lhs_sym.diagonal_value(z);
        const cplx rhs = base.diagonal_value(pz) - base(pz, p0) - base(p0, pz) + base.diagonal_value(p0);
        worst = std::max(worst, std::abs(lhs - rhs));
        worst_tail = std::max(worst_tail, mc.tail * kernel_full(std::norm(z)) * t.norm_certificate());
    }
    r.add_eq("identity_max_discrepancy", worst, 0.0, 1e-6 + worst_tail);
    r.add_eq("norm_preserved", mc.t_phi.norm_certificate(), t.norm_certificate(), 1e-6 + mc.tail);
    r.params()["tail"] = mc.tail;
    return r;
}

// ---------------------------------------------------------------------------
// Product of two Dirichlet-space functions outside the Bloch space.
//
//   f(z) = sum_j j^{-1} (1 - r_j^2) z / (1 - r_j z)
//   g(z) = sum_j j^{-1} T_j^{-1/2} log 1/(1 - r_j z),   T_j = log 1/(1 - r_j^2)
//
// All quantities are carried in terms of T_j because 1 - r_j^2 underflows
// long before the interesting levels.

namespace detail
{

inline double log_add(double x, double y)
{
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
}

} // namespace detail

// log(1 - r_j r_k) given T_j, T_k, with r = sqrt(1 - e^{-T}).
inline double log_one_minus_rr(double tj, double tk)
{
    // 1 - r_j r_k = (x_j + x_k - x_j x_k) / (1 + r_j r_k), x = e^{-T}.
    const double xj = std::exp(-tj);
    const double num = detail::log_add(-tj, -tk + std::log1p(-xj));
    const double rr = std::sqrt(-std::expm1(-tj)) * std::sqrt(-std::expm1(-tk));
    return num - std::log1p(rr);
}

inline double radius_from_T(double t)
{
    return std::sqrt(-std::expm1(-t));
}

// Both sparseness conditions for the pair (j, k), in log form:
//   (1) log 1/(1 - r_j r_k) <= 2^{-|j-k|} sqrt(T_j T_k)
//   (2) -2 log(1 - r_j r_k) <= -|j-k| log 2 + T_j + T_k
struct SparsenessMargins {
    double cond1;
    double cond2;
};

inline SparsenessMargins sparseness_margins(int j, double tj, int k, double tk)
{
    const double l = log_one_minus_rr(tj, tk);
    const int gap = std::abs(j - k);
    const double m1 = std::ldexp(std::sqrt(tj * tk), -gap) - (-l);
    const double m2 = (-gap * std::numbers::ln2 + tj + tk) - (-2.0 * l);
    return {m1, m2};
}

struct MockBlochPolicy {
    double r1 = 0.5;
    double growth = 2.0; // factor applied to T after the minimal admissible value
    int iteration_cap = 200;
};

struct MockBlochResult {
    std::vector<double> T;          // log 1/(1 - r_l^2)
    std::vector<double> r;          // r_l (rounds to 1 at deep levels)
    double f_norm2 = 0.0;           // Dirichlet seminorm sums over j, k <= L
    double g_norm2 = 0.0;
    std::vector<double> bloch;      // (1 - r_l^2) f'(r_l) g(r_l), finite double sum
    std::vector<double> bloch_lower; // l^{-2} sqrt(T_l)
    double worst_cond1 = 0.0;       // smallest margin over all pairs
    double worst_cond2 = 0.0;
    PowerSeries1 f, g, fg;
};

inline MockBlochResult mock_bloch_construct(int levels, const MockBlochPolicy &policy = {}, int order = 64)
{
    detail::require(levels >= 2, "mock_bloch_construct: at least two levels required");
    detail::require(policy.r1 > 0.0 && policy.r1 < 1.0, "mock_bloch_construct: r_1 must lie in (0, 1)");
    detail::require(policy.growth >= 1.0, "mock_bloch_construct: growth factor must be at least 1");
    MockBlochResult out;
    out.T.push_back(-std::log1p(-policy.r1 * policy.r1));
    const auto admissible = [&](int idx, double t) {
        for (int k = 0; k < idx; ++k) {
            const auto mg = sparseness_margins(idx + 1, t, k + 1, out.T[k]);
            if (mg.cond1 < 0.0 || mg.cond2 < 0.0) {
                return false;
            }
        }
        return true;
    };
    for (int idx = 1; idx < levels; ++idx) {
        double lo = out.T.back();
        double hi = 2.0 * lo;
        int it = 0;
        while (!admissible(idx, hi)) {
            lo = hi;
            hi *= 2.0;
            if (++it > policy.iteration_cap) {
                throw precondition_error("mock_bloch_construct: no admissible radius within the iteration cap");
            }
        }
        // Smallest admissible T, by bisection on the bracket [lo, hi].
        for (int b = 0; b < 200 && hi - lo > 1e-12 * hi; ++b) {
            const double mid = 0.5 * (lo + hi);
            (admissible(idx, mid) ? hi : lo) = mid;
        }
        double t = hi * policy.growth;
        while (!admissible(idx, t)) {
            t *= 2.0;
            if (++it > policy.iteration_cap) {
                throw precondition_error("mock_bloch_construct: growth step left the admissible set");
            }
        }
        out.T.push_back(t);
    }

    const int n = levels;
    out.worst_cond1 = out.worst_cond2 = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (j == k) {
                continue;
            }
            const auto mg = sparseness_margins(j + 1, out.T[j], k + 1, out.T[k]);
            out.worst_cond1 = std::min(out.worst_cond1, mg.cond1);
            out.worst_cond2 = std::min(out.worst_cond2, mg.cond2);
        }
    }

    for (double t : out.T) {
        out.r.push_back(radius_from_T(t));
    }
    // (1 - r_j^2)(1 - r_k^2)/(1 - r_j r_k)^2 and log(1/(1 - r_j r_k)) / sqrt(T_j T_k).
    detail::neumaier_sum fsum;
    detail::neumaier_sum gsum;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const double l = log_one_minus_rr(out.T[j], out.T[k]);
            const double w = 1.0 / ((j + 1.0) * (k + 1.0));
            fsum.add(w * std::exp(-out.T[j] - out.T[k] - 2.0 * l));
            gsum.add(w * (-l) / std::sqrt(out.T[j] * out.T[k]));
        }
    }
    out.f_norm2 = fsum.value();
    out.g_norm2 = gsum.value();

    // (1 - r_l^2) f'(r_l) g(r_l) = sum_{j,k} (jk)^{-1} (1 - r_j^2)/(1 - r_j r_l)^2
    //                               * log(1/(1 - r_k r_l)) / sqrt(T_k).
    for (int l = 0; l < n; ++l) {
        detail::neumaier_sum fp;
        detail::neumaier_sum gv;
        for (int j = 0; j < n; ++j) {
            fp.add(std::exp(-out.T[l] - out.T[j] - 2.0 * log_one_minus_rr(out.T[j], out.T[l])) / (j + 1.0));
            gv.add(-log_one_minus_rr(out.T[j], out.T[l]) / std::sqrt(out.T[j]) / (j + 1.0));
        }
        out.bloch.push_back(fp.value() * gv.value());
        out.bloch_lower.push_back(std::sqrt(out.T[l]) / ((l + 1.0) * (l + 1.0)));
    }

    // Taylor coefficients: f_p = sum_j j^{-1}(1 - r_j^2) r_j^{p-1}, g_p = sum_j j^{-1} T_j^{-1/2} r_j^p / p.
    std::vector<cplx> fc(static_cast<std::size_t>(order) + 1, cplx{0.0});
    std::vector<cplx> gc(static_cast<std::size_t>(order) + 1, cplx{0.0});
    for (int j = 0; j < n; ++j) {
        const double x = std::exp(-out.T[j]);
        const double rj = out.r[j];
        double pw = 1.0;
        for (int p = 1; p <= order; ++p) {
            fc[p] += x * pw / (j + 1.0);
            pw *= rj;
            gc[p] += pw / (p * (j + 1.0) * std::sqrt(out.T[j]));
        }
    }
    out.f = PowerSeries1(order, std::move(fc));
    out.g = PowerSeries1(order, std::move(gc));
    out.fg = out.f * out.g;
    return out;
}

// Rank-one matrix whose symbol is W = zw f(z) g(w), i.e. Z = f (x) g:
// m_{jk} = sqrt(jk) f_{j-1} g_{k-1}.
inline CMatrix rank_one_matrix(const PowerSeries1 &f, const PowerSeries1 &g)
{
    const int n = std::min(f.order(), g.order()) + 1;
    CMatrix a(n, n);
    for (int j = 1; j <= n; ++j) {
        for (int k = 1; k <= n; ++k) {
            a(k - 1, j - 1) = std::sqrt(static_cast<double>(j) * k) * f[j - 1] * g[k - 1];
        }
    }
    return a;
}

// diag Z = diag W / z^2, to the order fixed by the symbol's truncation.
inline PowerSeries1 z_diagonal(const DirichletSymbol &s, int order)
{
    detail::require(order + 2 <= s.diag.order(), "z_diagonal: order exceeds the symbol's truncation");
    std::vector<cplx> c(static_cast<std::size_t>(order) + 1);
    for (int l = 0; l <= order; ++l) {
        c[l] = s.diag[l + 2];
    }
    return PowerSeries1(order, std::move(c));
}

inline BoundReport mock_bloch_report(const MockBlochResult &mb, double bloch_threshold)
{
    BoundReport r("mockbloch");
    r.params() = {{"levels", mb.T.size()}, {"bloch_threshold", bloch_threshold}};
    r.add_ge("sparseness_condition_1_min_margin", mb.worst_cond1, 0.0, 0.0);
    r.add_ge("sparseness_condition_2_min_margin", mb.worst_cond2, 0.0, 0.0);
    r.add_flag("f_dirichlet_sum_finite", std::isfinite(mb.f_norm2));
    r.add_flag("g_dirichlet_sum_finite", std::isfinite(mb.g_norm2));
    for (std::size_t l = 0; l < mb.T.size(); ++l) {
        r.add_ge("bloch_ge_lower_bound_level_" + std::to_string(l + 1), mb.bloch[l], mb.bloch_lower[l],
                 1e-12 * mb.bloch_lower[l]);
    }
    for (std::size_t l = 1; l < mb.T.size(); ++l) {
        r.add_ge("bloch_lower_bound_increases_level_" + std::to_string(l + 1), mb.bloch_lower[l],
                 mb.bloch_lower[l - 1], 0.0);
    }
    r.add_ge("bloch_lower_bound_final_level", mb.bloch_lower.back(), bloch_threshold, 0.0);

    const int order = mb.fg.order();
    const DirichletSymbol sym = symbol_from_matrix(rank_one_matrix(mb.f, mb.g));
    const PowerSeries1 dz = z_diagonal(sym, order);
    double worst = 0.0;
    for (int l = 0; l <= order; ++l) {
        worst = std::max(worst, std::abs(dz[l] - mb.fg[l]));
    }
    r.add_eq("fg_equals_rank_one_symbol_diagonal", worst, 0.0, 1e-12);
    return r;
}

} // namespace gafsym

#endif
