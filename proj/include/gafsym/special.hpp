#ifndef GAFSYM_SPECIAL_HPP
#define GAFSYM_SPECIAL_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include <gafsym/errors.hpp>

namespace gafsym
{

// Rising factorial (a)_n = a (a+1) ... (a+n-1); (a)_0 = 1.
inline double pochhammer(double a, int n)
{
    detail::require(n >= 0, "pochhammer: n must be nonnegative");
    double p = 1.0;
    for (int i = 0; i < n; ++i) {
        p *= a + i;
    }
    return p;
}

namespace detail
{

// Compensated (Neumaier) accumulator.
struct neumaier_sum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x)
    {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const
    {
        return sum + comp;
    }
};

inline double simpson_step(const std::function<double(double)> &f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
           + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson quadrature with Richardson correction.
inline double integrate_adaptive(const std::function<double(double)> &f, double a, double b, double tol = 1e-12,
                                 int max_depth = 50)
{
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Power series of 2F1(1/2, 1/2; 3/2; x) = sum_n ((1/2)_n)^2 / ((3/2)_n n!) x^n.
// Stops once a term drops below 1e-16 of the partial sum; at most 10^6 terms.
inline double hyp2f1_half_series(double x)
{
    detail::neumaier_sum acc;
    double term = 1.0;
    acc.add(term);
    for (int n = 0; n < 1000000; ++n) {
        term *= (n + 0.5) * (n + 0.5) / ((n + 1.5) * (n + 1.0)) * x;
        acc.add(term);
        if (std::abs(term) < 1e-16 * std::abs(acc.value())) {
            break;
        }
    }
    return acc.value();
}

// Closed form arcsin(sqrt x)/sqrt x, with value 1 at x = 0.
inline double hyp2f1_half_closed(double x)
{
    if (x == 0.0) {
        return 1.0;
    }
    const double r = std::sqrt(x);
    return std::asin(r) / r;
}

// 2F1(1/2, 1/2; 3/2; x) for 0 <= x < 1. Both the series and the closed form
// are computed; disagreement beyond 1e-12 raises consistency_error.
inline double hyp2f1_half(double x)
{
    detail::require(x >= 0.0 && x < 1.0, "hyp2f1_half: x must lie in [0, 1)");
    const double series = hyp2f1_half_series(x);
    const double closed = hyp2f1_half_closed(x);
    if (std::abs(series - closed) > 1e-12 * std::max(1.0, std::abs(closed))) {
        throw consistency_error("hyp2f1_half: series and closed form disagree at x = " + std::to_string(x));
    }
    return closed;
}

// Integral of t^{-1/2} (1-t)^{-1/2} over [1/(d+1), 1 - 1/(d+1)].
// Closed form pi - 4 (d+1)^{-1/2} 2F1(1/2,1/2;3/2;1/(d+1)); cross-checked by
// quadrature after the substitution t = sin^2 u.
inline double incomplete_beta_sym(int d)
{
    detail::require(d >= 2, "incomplete_beta_sym: d must be at least 2");
    const double x = 1.0 / (d + 1.0);
    const double closed = std::numbers::pi - 4.0 / std::sqrt(d + 1.0) * hyp2f1_half(x);

    // dt = 2 sin u cos u du cancels the endpoint singularities.
    const auto integrand = [](double u) {
        const double s = std::sin(u);
        const double c = std::cos(u);
        const double t = s * s;
        return 2.0 * s * c / std::sqrt(t * (1.0 - t));
    };
    const double lo = std::asin(std::sqrt(x));
    const double hi = std::asin(std::sqrt(1.0 - x));
    const double quad = integrate_adaptive(integrand, lo, hi, 1e-12);
    if (std::abs(quad - closed) > 1e-9) {
        throw consistency_error("incomplete_beta_sym: quadrature and closed form disagree at d = "
                                + std::to_string(d));
    }
    return closed;
}

enum class BoundKind { series_bound, circle_mean };

// 2s log(e^{1/2}/(1-s)) = s - 2s log(1-s).
inline double series_bound_rhs(double s)
{
    detail::require(s >= 0.0 && s < 1.0, "series bound: argument must lie in [0, 1)");
    return s - 2.0 * s * std::log1p(-s);
}

// 2r^2 log(1/(1-r^2)) + r^2.
inline double circle_mean_rhs(double r)
{
    detail::require(r >= 0.0 && r < 1.0, "circle mean bound: argument must lie in [0, 1)");
    const double s = r * r;
    return -2.0 * s * std::log1p(-s) + s;
}

inline double rhs_bound(BoundKind kind, double x)
{
    return kind == BoundKind::series_bound ? series_bound_rhs(x) : circle_mean_rhs(x);
}

} // namespace gafsym

#endif
