#ifndef GAFSYM_GRUNSKY_HPP
#define GAFSYM_GRUNSKY_HPP

// Grunsky symbols of normalized maps phi(z) = z + a_2 z^2 + ...:
//   Q(z, w) = log((phi(z) - phi(w))/(z - w)) - log(phi(z)/z) - log(phi(w)/w),
// the Grunsky matrix m_jk = sqrt(jk) [z^j w^k] Q, the nonlinear wave equation
//   Q_zw + Q_z Q_w - (z^2 Q_z - w^2 Q_w) / (zw (z - w)) = 0,
// and recovery of phi from Q.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gafsym/errors.hpp>
#include <gafsym/matrix.hpp>
#include <gafsym/report.hpp>
#include <gafsym/series.hpp>

namespace gafsym
{

class ConformalMap
{
public:
    // c_0 = 0 and c_1 = 1 are required exactly.
    ConformalMap(PowerSeries1 series, std::string name = "custom") : m_series(std::move(series)), m_name(std::move(name))
    {
        detail::require(m_series.order() >= 1, "ConformalMap: series must have order at least 1");
        detail::require(m_series[0] == cplx{0.0} && m_series[1] == cplx{1.0},
                        "ConformalMap: normalization phi(0) = 0, phi'(0) = 1 violated");
    }

    static ConformalMap identity(int order)
    {
        return {PowerSeries1::monomial(order, 1), "identity"};
    }

    // z / (1 - z)^2 = sum n z^n.
    static ConformalMap koebe(int order)
    {
        std::vector<cplx> c(static_cast<std::size_t>(order) + 1);
        for (int n = 0; n <= order; ++n) {
            c[n] = static_cast<double>(n);
        }
        return {PowerSeries1(order, std::move(c)), "koebe"};
    }

    // z / (1 - c z) = sum c^{n-1} z^n.
    static ConformalMap cayley_like(cplx c, int order)
    {
        std::vector<cplx> v(static_cast<std::size_t>(order) + 1, cplx{0.0});
        cplx p = 1.0;
        for (int n = 1; n <= order; ++n) {
            v[n] = p;
            p *= c;
        }
        return {PowerSeries1(order, std::move(v)), "cayley_like"};
    }

    // z + sum_{k>=2} coeffs[k-2] z^k.
    static ConformalMap polynomial(const std::vector<cplx> &higher, int order)
    {
        std::vector<cplx> v(static_cast<std::size_t>(order) + 1, cplx{0.0});
        v[1] = 1.0;
        for (std::size_t i = 0; i < higher.size() && static_cast<int>(i) + 2 <= order; ++i) {
            v[i + 2] = higher[i];
        }
        return {PowerSeries1(order, std::move(v)), "custom"};
    }

    const PowerSeries1 &series() const
    {
        return m_series;
    }

    const std::string &name() const
    {
        return m_name;
    }

    int order() const
    {
        return m_series.order();
    }

private:
    PowerSeries1 m_series;
    std::string m_name;
};

struct GrunskySymbol {
    PowerSeries2 Q;
    std::string source;

    int order() const
    {
        return Q.order();
    }
};

// Vanishing first row and column, symmetric coefficients.
inline bool grunsky_invariants_hold(const PowerSeries2 &q, double tol = 1e-12)
{
    for (int i = 0; i <= q.order(); ++i) {
        if (std::abs(q(0, i)) > tol || std::abs(q(i, 0)) > tol) {
            return false;
        }
    }
    return q.is_symmetric(tol);
}

// phi(z)/z as a series of one lower order.
inline PowerSeries1 quotient_by_z(const PowerSeries1 &phi)
{
    std::vector<cplx> c(static_cast<std::size_t>(phi.order()));
    for (int j = 0; j + 1 <= phi.order(); ++j) {
        c[j] = phi[j + 1];
    }
    return PowerSeries1(phi.order() - 1, std::move(c));
}

// Q to order N; needs the map to order N + 1.
inline GrunskySymbol grunsky_symbol(const ConformalMap &phi, int n)
{
    detail::require(n >= 0 && n + 1 <= phi.order(), "grunsky_symbol: map series must have order at least N + 1");
    const PowerSeries1 s = phi.series().truncated(n + 1);
    const PowerSeries2 dd = divided_difference(s);
    const PowerSeries1 lq = log(quotient_by_z(s));
    PowerSeries2 q = log(dd) - PowerSeries2::lift_z(lq) - PowerSeries2::lift_w(lq);
    // Symmetric by construction; the flag re-checks it.
    q = PowerSeries2(q.order(), std::vector<cplx>(q.grid().begin(), q.grid().end()), true);
    return {std::move(q), phi.name()};
}

// log(z^2 phi'(z) / phi(z)^2), the diagonal of Q computed without Q.
inline PowerSeries1 grunsky_diagonal_direct(const ConformalMap &phi, int n)
{
    detail::require(n + 1 <= phi.order(), "grunsky_diagonal_direct: map series must have order at least N + 1");
    const PowerSeries1 s = phi.series().truncated(n + 1);
    const PowerSeries1 u = quotient_by_z(s); // phi/z, order N
    const PowerSeries1 dphi = derivative(s); // order N
    return log(dphi * reciprocal(u * u));
}

// m_jk = sqrt(jk) [z^j w^k] Q for 1 <= j, k <= N. Needs Q of order 2N, hence
// the map to order 2N + 1.
inline ContractionMatrix grunsky_matrix(const ConformalMap &phi, int n)
{
    detail::require(n >= 1, "grunsky_matrix: N must be positive");
    const GrunskySymbol q = grunsky_symbol(phi, 2 * n);
    CMatrix m(n, n);
    for (int j = 1; j <= n; ++j) {
        for (int k = 1; k <= n; ++k) {
            m(k - 1, j - 1) = std::sqrt(static_cast<double>(j) * k) * q.Q(j, k);
        }
    }
    return ContractionMatrix(std::move(m));
}

// Q_zw + Q_z Q_w - (z^2 Q_z - w^2 Q_w)/(zw(z - w)) to order N - 2, every
// division performed exactly through divide_by_factor.
inline PowerSeries2 nlw_residual(const GrunskySymbol &sym)
{
    const PowerSeries2 &q = sym.Q;
    detail::require(q.order() >= 2, "nlw_residual: symbol order must be at least 2");
    detail::require(grunsky_invariants_hold(q, 1e-10 * std::max(1.0, q.max_abs())),
                    "nlw_residual: symbol must vanish on the axes and be symmetric");
    const PowerSeries2 qz = derivative(q, Var::z);
    const PowerSeries2 qw = derivative(q, Var::w);
    const PowerSeries2 qzw = derivative(qz, Var::w);
    const PowerSeries2 p = shift(qz, 2, 0) - shift(qw, 0, 2);
    const PowerSeries2 t = divide_by_factor(divide_by_factor(divide_by_factor(p, Factor::z_minus_w), Factor::z),
                                            Factor::w);
    return qzw + qz * qw - t;
}

inline constexpr double nlw_tol = 1e-9;
inline constexpr double reconstruct_residual_limit = 1e-8;

// The chart at infinity: psi(xi) = 1/phi(1/xi) satisfies psi'(xi) = exp(diag Q(1/xi)).
// Writing E(z) = exp(diag Q)(z) = 1 + sum_{l>=2} E_l z^l and integrating,
//   1/phi(z) = 1/z - a_2 - sum_{l>=2} E_l/(l-1) z^{l-1}.
// Q fixes phi only up to phi -> phi/(1 + c phi), which shifts a_2, so the
// coefficient a_2 is a parameter of the reconstruction (default 0).
inline ConformalMap reconstruct_map(const GrunskySymbol &sym, int n, cplx a2 = 0.0)
{
    detail::require(n >= 2 && n <= sym.order(), "reconstruct_map: N must lie in 2..order(Q)");
    const PowerSeries2 q = sym.Q.truncated(n);
    const double res = nlw_residual({q, sym.source}).max_abs();
    if (res > reconstruct_residual_limit) {
        throw precondition_error("reconstruct_map: symbol fails the wave equation (residual "
                                 + std::to_string(res) + ")");
    }
    const PowerSeries1 e = exp(diagonal(q)); // order N
    // z/phi(z) = 1 - a_2 z - sum_{l>=2} E_l/(l-1) z^l, known to order N.
    std::vector<cplx> den(static_cast<std::size_t>(n) + 1, cplx{0.0});
    den[0] = 1.0;
    den[1] = -a2;
    for (int l = 2; l <= n; ++l) {
        den[l] = -e[l] / static_cast<double>(l - 1);
    }
    const PowerSeries1 ratio = reciprocal(PowerSeries1(n, std::move(den))); // phi(z)/z
    std::vector<cplx> c(static_cast<std::size_t>(n) + 2, cplx{0.0});
    for (int j = 0; j <= n; ++j) {
        c[j + 1] = ratio[j];
    }
    c[1] = 1.0;
    return {PowerSeries1(n + 1, std::move(c)), "reconstructed"};
}

// Residual, symmetry and axis checks, the Grunsky norm, and the diagonal
// cross-check against log(z^2 phi'/phi^2).
inline BoundReport grunsky_report(const ConformalMap &phi, int n)
{
    BoundReport r("grunsky");
    r.params() = {{"map", phi.name()}, {"trunc", n}};
    const GrunskySymbol q = grunsky_symbol(phi, n);
    r.add_flag("symbol_vanishes_on_axes_and_is_symmetric", grunsky_invariants_hold(q.Q));
    const PowerSeries2 res = nlw_residual(q);
    r.add_eq("nlw_residual_max", res.max_abs(), 0.0, nlw_tol);
    const PowerSeries1 diag_q = diagonal(q.Q);
    const PowerSeries1 direct = grunsky_diagonal_direct(phi, n);
    r.add_eq("diagonal_matches_log_z2dphi_over_phi2", (diag_q - direct).max_abs(), 0.0, 1e-12);
    const ContractionMatrix g = grunsky_matrix(phi, n / 2 > 0 ? n / 2 : 1);
    r.add_le("grunsky_norm", g.norm_certificate(), 1.0, contraction_slack);
    return r;
}

} // namespace gafsym

#endif
