#ifndef GAFSYM_BOUNDS_HPP
#define GAFSYM_BOUNDS_HPP

// Coefficient-level verifiers for the correlation inequalities and the
// diagonal norm expansion. Disk and circle integrals of polynomial data are
// evaluated through exact monomial moments:
//   int_D |z|^{2k} dA = 1/(k+1),   int_T z^j conj(z)^k ds = delta_{jk}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <gafsym/errors.hpp>
#include <gafsym/gaf.hpp>
#include <gafsym/matrix.hpp>
#include <gafsym/report.hpp>
#include <gafsym/series.hpp>
#include <gafsym/special.hpp>

namespace gafsym
{

namespace detail
{

// Floating-point accumulation bound for a sum of n nonnegative terms
// compared against a reference of similar size.
inline double rounding_tol(std::size_t n_terms, double lhs, double rhs)
{
    return 4.0 * static_cast<double>(n_terms + 1) * std::numeric_limits<double>::epsilon()
           * (std::abs(lhs) + std::abs(rhs));
}

inline std::string grid_label(const std::string &name, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.10g", name.c_str(), x);
    return buf;
}

} // namespace detail

// Fhat(l) = sum_{j+k=l} (jk)^{-1/2} A(k, j), l = 0..2N.
inline std::vector<cplx> antidiagonal_sums(const CMatrix &a)
{
    const int n = static_cast<int>(a.rows());
    std::vector<cplx> f(static_cast<std::size_t>(2 * n) + 1, cplx{0.0});
    for (int j = 1; j <= n; ++j) {
        for (int k = 1; k <= n; ++k) {
            f[j + k] += a(k - 1, j - 1) / std::sqrt(static_cast<double>(j) * k);
        }
    }
    return f;
}

// sum_l x^l |Fhat(l)|^2.
inline double weighted_square_sum(const std::vector<cplx> &fhat, double x)
{
    detail::neumaier_sum acc;
    double p = 1.0;
    for (const auto &c : fhat) {
        acc.add(p * std::norm(c));
        p *= x;
    }
    return acc.value();
}

// sum_{l>=2} s^l |Fhat(l)|^2 <= 2s log(e^{1/2}/(1-s)) on the grid. The curve
// carries the weighted sums S(l) = sqrt(l) Fhat(l) and the running average of
// |S(l)|^2 / 2 over l = 2..L.
inline BoundReport verify_series_bound(const std::vector<cplx> &fhat, const std::vector<double> &s_grid)
{
    BoundReport r("series_bound");
    for (double s : s_grid) {
        detail::require(s >= 0.0 && s < 1.0, "verify_series_bound: s must lie in [0, 1)");
        const double lhs = weighted_square_sum(fhat, s);
        const double rhs = series_bound_rhs(s);
        r.add_le(detail::grid_label("s", s), lhs, rhs, detail::rounding_tol(fhat.size(), lhs, rhs));
    }
    r.curve().columns = {"l", "S_abs", "running_avg_half_S2"};
    double run = 0.0;
    for (std::size_t l = 2; l < fhat.size(); ++l) {
        const double sl = std::sqrt(static_cast<double>(l)) * std::abs(fhat[l]);
        run += 0.5 * sl * sl;
        r.curve().rows.push_back({static_cast<double>(l), sl, run / static_cast<double>(l - 1)});
    }
    return r;
}

inline BoundReport verify_series_bound(const ContractionMatrix &a, const std::vector<double> &s_grid)
{
    detail::require(a.is_contraction(), "verify_series_bound: input is not a contraction");
    return verify_series_bound(antidiagonal_sums(a.entries()), s_grid);
}

// Orthonormal systems as columns of X and Y; <x_j, y_k> = (Y* X)(k, j).
inline BoundReport verify_series_bound(const CMatrix &x, const CMatrix &y, const std::vector<double> &s_grid)
{
    detail::require(x.rows() == y.rows() && x.cols() == y.cols(), "verify_series_bound: system shapes differ");
    return verify_series_bound(antidiagonal_sums(y.adjoint() * x), s_grid);
}

// int_T |E Phi(r z) Psi(r z)|^2 ds = sum_l r^{2l} |Fhat(l)|^2 <= 2r^2 log 1/(1-r^2) + r^2.
inline BoundReport verify_circle_mean(const GafCoupling &c, const std::vector<double> &r_grid)
{
    BoundReport rep("circle_mean");
    rep.params() = {{"mode", to_string(c.mode())}, {"trunc", c.trunc()}};
    const auto fhat = CorrelationEvaluator(c).analytic_diagonal();
    for (double r : r_grid) {
        detail::require(r >= 0.0 && r < 1.0, "verify_circle_mean: r must lie in [0, 1)");
        const double lhs = weighted_square_sum(fhat, r * r);
        const double rhs = circle_mean_rhs(r);
        rep.add_le(detail::grid_label("r", r), lhs, rhs, detail::rounding_tol(fhat.size(), lhs, rhs));
    }
    return rep;
}

// The intermediate estimate sum_l l r^{2l}/(l+1) |Fhat(l)|^2 <= 2r^2 log 1/(1-r^2),
// i.e. the Littlewood-Paley form of the derivative bound for E Phi Psi.
inline BoundReport verify_phipsi(const GafCoupling &c, const std::vector<double> &r_grid)
{
    BoundReport rep("phipsi");
    rep.params() = {{"mode", to_string(c.mode())}, {"trunc", c.trunc()}};
    const auto fhat = CorrelationEvaluator(c).analytic_diagonal();
    for (double r : r_grid) {
        detail::require(r >= 0.0 && r < 1.0, "verify_phipsi: r must lie in [0, 1)");
        detail::neumaier_sum acc;
        double p = 1.0;
        const double s = r * r;
        for (std::size_t l = 0; l < fhat.size(); ++l) {
            acc.add(p * std::norm(fhat[l]) * static_cast<double>(l) / (l + 1.0));
            p *= s;
        }
        const double lhs = acc.value();
        const double rhs = -2.0 * s * std::log1p(-s);
        rep.add_le(detail::grid_label("r", r), lhs, rhs, detail::rounding_tol(fhat.size(), lhs, rhs));
    }
    return rep;
}

struct FundamentalIntegral {
    double lhs;
    double rhs;
    double tail; // sum_{j>N} |z|^{2j}/j bound, scaled by |a|^2 + |b|^2
};

// int_D |a w E Phi(z) Psi'(w) + b conj(w) E Phi(z) conj(Psi'(w))|^2 dA(w)/|w|^2.
// The w-monomials are orthogonal, so the two parts separate and
//   int_D |sum_k c_k sqrt(k) w^{k-1}|^2 dA(w) = sum_k |c_k|^2
// with c = Ca e(z) (analytic part) and c = Cs e(z) (sesquianalytic part).
inline FundamentalIntegral fundamental_integral(const CorrelationEvaluator &eval, cplx z, cplx a, cplx b)
{
    detail::require(std::abs(z) < 1.0, "fundamental_integral: z must lie in the disk");
    const int n = eval.trunc();
    const CVector e = basis_vector(z, n);
    const double part_a = (eval.analytic_matrix() * e).squaredNorm();
    const double part_b = (eval.sesqui_matrix() * e).squaredNorm();
    const double wa = std::norm(a);
    const double wb = std::norm(b);
    return {wa * part_a + wb * part_b, (wa + wb) * kernel_full(std::norm(z)), (wa + wb) * tail_bound(z, n)};
}

// margin >= -tail at every z; with expect_equality also margin <= tail.
inline BoundReport verify_fundamental_integral(const GafCoupling &c, const std::vector<cplx> &zs, cplx a, cplx b,
                                               bool expect_equality = false)
{
    BoundReport rep("fundamental_integral");
    rep.params() = {{"mode", to_string(c.mode())},
                    {"trunc", c.trunc()},
                    {"a", {a.real(), a.imag()}},
                    {"b", {b.real(), b.imag()}}};
    const CorrelationEvaluator eval(c);
    for (const cplx z : zs) {
        const auto fi = fundamental_integral(eval, z, a, b);
        const std::string at = "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
        const double tol = fi.tail + detail::rounding_tol(static_cast<std::size_t>(c.trunc()), fi.lhs, fi.rhs);
        rep.add_le("z=" + at, fi.lhs, fi.rhs, tol);
        if (expect_equality) {
            rep.add_le("equality_gap z=" + at, fi.rhs - fi.lhs, tol, 0.0);
        }
    }
    return rep;
}

struct AsymptoticVariance {
    std::vector<double> r;
    std::vector<double> ratio;
    double limsup_proxy; // max of the ratio over the last quartile of the grid
};

// ratio(r) = sum_l r^{2l} |Fhat(l)|^2 / log 1/(1-r^2). The limsup itself is
// not computable from finite data; the last-quartile maximum is an estimate.
inline AsymptoticVariance asymptotic_variance(const std::vector<cplx> &fhat, const std::vector<double> &r_grid)
{
    detail::require(!r_grid.empty(), "asymptotic_variance: empty grid");
    AsymptoticVariance out{r_grid, {}, 0.0};
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        const double r = r_grid[i];
        detail::require(r > 0.0 && r < 1.0, "asymptotic_variance: r must lie in (0, 1)");
        detail::require(i == 0 || r > r_grid[i - 1], "asymptotic_variance: grid must be increasing");
        out.ratio.push_back(weighted_square_sum(fhat, r * r) / kernel_full(r * r));
    }
    const std::size_t start = out.ratio.size() - std::max<std::size_t>(1, out.ratio.size() / 4);
    out.limsup_proxy = *std::max_element(out.ratio.begin() + static_cast<std::ptrdiff_t>(start), out.ratio.end());
    return out;
}

inline AsymptoticVariance asymptotic_variance(const PowerSeries1 &f, const std::vector<double> &r_grid)
{
    return asymptotic_variance(std::vector<cplx>(f.coeffs().begin(), f.coeffs().end()), r_grid);
}

// ---------------------------------------------------------------------------
// Diagonal norm expansion on the bidisk: for a polynomial f(z, w),
//   sum_{p,q} |c_pq|^2 / (q+1)
//     = sum_n (n+2)_n/(n+1)! || sum_{k<=n} kappa_{n,k} d_z^{n-k} diag(d_w^k f) ||^2_{A^2_{2n+1}},
//   kappa_{n,k} = (-1)^k (k+2)_{n-k} / (k! (n-k)! (n+k+2)_{n-k}),
// with ||sum a_m z^m||^2_{A^2_alpha} = sum |a_m|^2 m! / (alpha+2)_m.

inline constexpr int expansion_max_degree = 12;

// Highest total degree carrying a nonzero coefficient (-1 for f = 0).
inline int total_degree(const PowerSeries2 &f)
{
    int deg = -1;
    for (int j = 0; j <= f.order(); ++j) {
        for (int k = 0; j + k <= f.order(); ++k) {
            if (f(j, k) != cplx{0.0}) {
                deg = std::max(deg, j + k);
            }
        }
    }
    return deg;
}

inline double hardy_bergman_norm2(const PowerSeries2 &f)
{
    detail::neumaier_sum acc;
    for (int p = 0; p <= f.order(); ++p) {
        for (int q = 0; p + q <= f.order(); ++q) {
            acc.add(std::norm(f(p, q)) / (q + 1.0));
        }
    }
    return acc.value();
}

inline double factorial(int n)
{
    return std::tgamma(n + 1.0);
}

// ||sum a_m z^m||^2 in the standard weighted Bergman space A^2_alpha.
inline double weighted_bergman_norm2(const PowerSeries1 &h, double alpha)
{
    detail::neumaier_sum acc;
    for (int m = 0; m <= h.order(); ++m) {
        acc.add(std::norm(h[m]) * factorial(m) / pochhammer(alpha + 2.0, m));
    }
    return acc.value();
}

// The n-th term of the expansion (nonnegative by construction).
inline double expansion_term(const PowerSeries2 &f, int n)
{
    const int d = f.order();
    PowerSeries1 h(std::max(d - n, 0));
    PowerSeries2 dwk = f;
    for (int k = 0; k <= n; ++k) {
        PowerSeries1 g = diagonal(dwk);
        for (int i = 0; i < n - k; ++i) {
            g = derivative(g);
        }
        const double kappa = ((k % 2) ? -1.0 : 1.0) * pochhammer(k + 2.0, n - k)
                             / (factorial(k) * factorial(n - k) * pochhammer(n + k + 2.0, n - k));
        h = h + cplx{kappa} * g.truncated(std::min(g.order(), h.order()));
        dwk = derivative(dwk, Var::w);
    }
    return pochhammer(n + 2.0, n) / factorial(n + 1) * weighted_bergman_norm2(h, 2.0 * n + 1.0);
}

struct ExpansionResult {
    double lhs;
    double rhs;
    std::vector<double> terms;
};

inline ExpansionResult diagonal_expansion(const PowerSeries2 &f_in)
{
    const int deg = total_degree(f_in);
    detail::require(deg <= expansion_max_degree, "diagonal_expansion: polynomial degree exceeds 12");
    const PowerSeries2 f = f_in.truncated(std::max(deg, 0));
    ExpansionResult out{hardy_bergman_norm2(f), 0.0, {}};
    detail::neumaier_sum acc;
    for (int n = 0; n <= std::max(deg, 0); ++n) {
        const double t = expansion_term(f, n);
        out.terms.push_back(t);
        acc.add(t);
    }
    out.rhs = acc.value();
    return out;
}

inline BoundReport diagonal_expansion_check(const PowerSeries2 &f)
{
    BoundReport rep("diagonal_expansion");
    const auto res = diagonal_expansion(f);
    rep.params() = {{"degree", total_degree(f)}};
    const double scale = std::max(std::abs(res.lhs), std::numeric_limits<double>::min());
    rep.add_eq("relative_discrepancy", std::abs(res.lhs - res.rhs) / scale, 0.0, 1e-10);
    for (std::size_t n = 0; n < res.terms.size(); ++n) {
        rep.add_ge("term_nonnegative_n=" + std::to_string(n), res.terms[n], 0.0, 0.0);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// For 0 <= m <= n:
//   sum_{k+l=m} (-1)^k (k+2)_{n-k} / (k! l! (n-m)! (n+k+2)_{n-k})
//     = (-1)^m (n+1) [(n-m+1)_m]^2 / (m! (m+1)! (n+2)_n),
// in exact rational arithmetic.

using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

namespace detail
{

inline bigint rising(long a, long n)
{
    bigint p = 1;
    for (long i = 0; i < n; ++i) {
        p *= a + i;
    }
    return p;
}

inline bigint fact(long n)
{
    return rising(1, n);
}

} // namespace detail

inline rational combinatorial_lhs(long n, long m)
{
    rational acc = 0;
    for (long k = 0; k <= m; ++k) {
        const long l = m - k;
        rational term(detail::rising(k + 2, n - k),
                      detail::fact(k) * detail::fact(l) * detail::fact(n - m) * detail::rising(n + k + 2, n - k));
        acc += (k % 2) ? rational(-term) : term;
    }
    return acc;
}

inline rational combinatorial_rhs(long n, long m)
{
    const bigint p = detail::rising(n - m + 1, m);
    rational v(bigint(n + 1) * p * p, detail::fact(m) * detail::fact(m + 1) * detail::rising(n + 2, n));
    return (m % 2) ? rational(-v) : v;
}

inline BoundReport combinatorial_identity_check(int n_max)
{
    detail::require(n_max >= 0 && n_max <= 40, "combinatorial_identity_check: n_max must lie in 0..40");
    BoundReport rep("combinatorial_identity");
    rep.params() = {{"n_max", n_max}};
    for (long n = 0; n <= n_max; ++n) {
        for (long m = 0; m <= n; ++m) {
            const rational lhs = combinatorial_lhs(n, m);
            const rational rhs = combinatorial_rhs(n, m);
            rep.add_exact("n=" + std::to_string(n) + ",m=" + std::to_string(m), lhs.convert_to<double>(),
                          rhs.convert_to<double>(), lhs == rhs);
        }
    }
    return rep;
}

// int_D |f'|^2 (1-|z|^2) dA = int_T |f|^2 ds - int_D |f|^2 dA for a polynomial f.
inline BoundReport littlewood_paley_check(const PowerSeries1 &f)
{
    BoundReport rep("littlewood_paley");
    rep.params() = {{"order", f.order()}};
    detail::neumaier_sum lhs;
    const PowerSeries1 fp = derivative(f);
    for (int k = 0; k <= fp.order(); ++k) {
        // int_D |z|^{2k} (1 - |z|^2) dA = 1/(k+1) - 1/(k+2)
        lhs.add(std::norm(fp[k]) / ((k + 1.0) * (k + 2.0)));
    }
    detail::neumaier_sum hardy;
    detail::neumaier_sum bergman;
    for (int m = 0; m <= f.order(); ++m) {
        hardy.add(std::norm(f[m]));
        bergman.add(std::norm(f[m]) / (m + 1.0));
    }
    const double rhs = hardy.value() - bergman.value();
    rep.add_eq("identity", lhs.value(), rhs, 1e-12 * std::max(1.0, hardy.value()));
    return rep;
}

} // namespace gafsym

#endif
