#ifndef GAFSYM_SERIES_HPP
#define GAFSYM_SERIES_HPP

// Truncated complex Taylor series in one variable (disk) and two variables
// (bidisk).
//
// Truncation semantics
// --------------------
// A PowerSeries1 of order N knows the coefficients of z^0..z^N.
// A PowerSeries2 of order N stores a square (N+1)x(N+1) grid but knows only
// the coefficients c_{jk} with total degree j+k <= N; the remaining grid
// entries are held at zero and never read. Total-degree truncation is closed
// under products, logarithms, derivatives, diagonal restriction and exact
// division by z, w and (z - w).
//
// Every binary operation truncates to the smaller order. Multiplication by
// an exactly known monomial or linear factor raises the order instead.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gafsym/errors.hpp>

namespace gafsym
{

using cplx = std::complex<double>;

// Tolerance for the unit-constant-term precondition of log.
inline constexpr double tol_const = 1e-10;
// Tolerance for exact division by a vanishing factor.
inline constexpr double tol_div = 1e-9;

class PowerSeries1
{
public:
    PowerSeries1() : PowerSeries1(0) {}

    explicit PowerSeries1(int order) : m_coeffs(check_order(order) + 1, cplx{0.0}) {}

    PowerSeries1(int order, std::vector<cplx> coeffs) : m_coeffs(std::move(coeffs))
    {
        check_order(order);
        detail::require(m_coeffs.size() == static_cast<std::size_t>(order) + 1,
                        "PowerSeries1: coefficient array length must equal order + 1");
    }

    // Order is inferred from the array length.
    static PowerSeries1 from_coeffs(std::vector<cplx> coeffs)
    {
        detail::require(!coeffs.empty(), "PowerSeries1: empty coefficient array");
        const int order = static_cast<int>(coeffs.size()) - 1;
        return PowerSeries1(order, std::move(coeffs));
    }

    // The monomial c z^j, known to the given order.
    static PowerSeries1 monomial(int order, int j, cplx c = 1.0)
    {
        PowerSeries1 r(order);
        if (j >= 0 && j <= order) {
            r.m_coeffs[static_cast<std::size_t>(j)] = c;
        }
        return r;
    }

    int order() const
    {
        return static_cast<int>(m_coeffs.size()) - 1;
    }

    cplx operator[](int j) const
    {
        return m_coeffs[static_cast<std::size_t>(j)];
    }

    std::span<const cplx> coeffs() const
    {
        return m_coeffs;
    }

    // Horner evaluation of the truncated polynomial.
    cplx operator()(cplx z) const
    {
        cplx acc{0.0};
        for (auto it = m_coeffs.rbegin(); it != m_coeffs.rend(); ++it) {
            acc = acc * z + *it;
        }
        return acc;
    }

    PowerSeries1 truncated(int order) const
    {
        detail::require(order >= 0 && order <= this->order(), "PowerSeries1::truncated: order out of range");
        return PowerSeries1(order, std::vector<cplx>(m_coeffs.begin(), m_coeffs.begin() + order + 1));
    }

    double max_abs() const
    {
        double m = 0.0;
        for (const auto &c : m_coeffs) {
            m = std::max(m, std::abs(c));
        }
        return m;
    }

    friend PowerSeries1 operator+(const PowerSeries1 &a, const PowerSeries1 &b)
    {
        const int n = std::min(a.order(), b.order());
        std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
        for (int j = 0; j <= n; ++j) {
            c[j] = a[j] + b[j];
        }
        return PowerSeries1(n, std::move(c));
    }

    friend PowerSeries1 operator-(const PowerSeries1 &a, const PowerSeries1 &b)
    {
        return a + (-b);
    }

    friend PowerSeries1 operator-(const PowerSeries1 &a)
    {
        return cplx{-1.0} * a;
    }

    friend PowerSeries1 operator*(cplx s, const PowerSeries1 &a)
    {
        std::vector<cplx> c(a.m_coeffs);
        for (auto &x : c) {
            x *= s;
        }
        return PowerSeries1(a.order(), std::move(c));
    }

    // Cauchy product truncated to the smaller order.
    friend PowerSeries1 operator*(const PowerSeries1 &a, const PowerSeries1 &b)
    {
        const int n = std::min(a.order(), b.order());
        std::vector<cplx> c(static_cast<std::size_t>(n) + 1, cplx{0.0});
        for (int i = 0; i <= n; ++i) {
            if (a[i] == cplx{0.0}) {
                continue;
            }
            for (int k = 0; i + k <= n; ++k) {
                c[i + k] += a[i] * b[k];
            }
        }
        return PowerSeries1(n, std::move(c));
    }

private:
    static int check_order(int order)
    {
        detail::require(order >= 0, "PowerSeries1: order must be nonnegative");
        return order;
    }

    std::vector<cplx> m_coeffs;
};

class PowerSeries2
{
public:
    PowerSeries2() : PowerSeries2(0) {}

    explicit PowerSeries2(int order, bool symmetric = false)
        : m_order(check_order(order)), m_symmetric(symmetric), m_coeffs(side() * side(), cplx{0.0})
    {
    }

    // Grid in row-major (j, k) order; entries with j + k > order are dropped.
    PowerSeries2(int order, std::vector<cplx> grid, bool symmetric = false)
        : m_order(check_order(order)), m_symmetric(false), m_coeffs(std::move(grid))
    {
        detail::require(m_coeffs.size() == side() * side(),
                        "PowerSeries2: grid size must equal (order + 1)^2");
        for (int j = 0; j <= m_order; ++j) {
            for (int k = m_order - j + 1; k <= m_order; ++k) {
                m_coeffs[index(j, k)] = 0.0;
            }
        }
        if (symmetric) {
            mark_symmetric();
        }
    }

    template <typename F>
    static PowerSeries2 generate(int order, F &&coeff, bool symmetric = false)
    {
        PowerSeries2 r(order);
        for (int j = 0; j <= order; ++j) {
            for (int k = 0; j + k <= order; ++k) {
                r.m_coeffs[r.index(j, k)] = coeff(j, k);
            }
        }
        if (symmetric) {
            r.mark_symmetric();
        }
        return r;
    }

    // f(z, w) = p(z), as a function of the first variable only.
    static PowerSeries2 lift_z(const PowerSeries1 &p)
    {
        return generate(p.order(), [&](int j, int k) { return k == 0 ? p[j] : cplx{0.0}; });
    }

    static PowerSeries2 lift_w(const PowerSeries1 &p)
    {
        return generate(p.order(), [&](int j, int k) { return j == 0 ? p[k] : cplx{0.0}; });
    }

    static PowerSeries2 monomial(int order, int j, int k, cplx c = 1.0)
    {
        return generate(order, [&](int a, int b) { return (a == j && b == k) ? c : cplx{0.0}; });
    }

    int order() const
    {
        return m_order;
    }

    bool symmetric_flag() const
    {
        return m_symmetric;
    }

    // Coefficient of z^j w^k; requires j + k <= order.
    cplx at(int j, int k) const
    {
        detail::require(j >= 0 && k >= 0 && j + k <= m_order, "PowerSeries2::at: index beyond truncation order");
        return m_coeffs[index(j, k)];
    }

    // Unchecked access for inner loops; j, k within the grid.
    cplx operator()(int j, int k) const
    {
        return m_coeffs[index(j, k)];
    }

    std::span<const cplx> grid() const
    {
        return m_coeffs;
    }

    cplx operator()(cplx z, cplx w) const
    {
        cplx acc{0.0};
        for (int j = m_order; j >= 0; --j) {
            cplx row{0.0};
            for (int k = m_order - j; k >= 0; --k) {
                row = row * w + m_coeffs[index(j, k)];
            }
            acc = acc * z + row;
        }
        return acc;
    }

    bool is_symmetric(double tol) const
    {
        for (int j = 0; j <= m_order; ++j) {
            for (int k = j + 1; j + k <= m_order; ++k) {
                if (std::abs(m_coeffs[index(j, k)] - m_coeffs[index(k, j)]) > tol) {
                    return false;
                }
            }
        }
        return true;
    }

    double max_abs() const
    {
        double m = 0.0;
        for (const auto &c : m_coeffs) {
            m = std::max(m, std::abs(c));
        }
        return m;
    }

    PowerSeries2 truncated(int order) const
    {
        detail::require(order >= 0 && order <= m_order, "PowerSeries2::truncated: order out of range");
        return generate(
            order, [&](int j, int k) { return m_coeffs[index(j, k)]; }, false)
            .with_flag(m_symmetric);
    }

    friend PowerSeries2 operator+(const PowerSeries2 &a, const PowerSeries2 &b)
    {
        const int n = std::min(a.order(), b.order());
        return generate(n, [&](int j, int k) { return a(j, k) + b(j, k); })
            .with_flag(a.m_symmetric && b.m_symmetric);
    }

    friend PowerSeries2 operator-(const PowerSeries2 &a, const PowerSeries2 &b)
    {
        const int n = std::min(a.order(), b.order());
        return generate(n, [&](int j, int k) { return a(j, k) - b(j, k); })
            .with_flag(a.m_symmetric && b.m_symmetric);
    }

    friend PowerSeries2 operator-(const PowerSeries2 &a)
    {
        return cplx{-1.0} * a;
    }

    friend PowerSeries2 operator*(cplx s, const PowerSeries2 &a)
    {
        return generate(a.order(), [&](int j, int k) { return s * a(j, k); }).with_flag(a.m_symmetric);
    }

    // Bivariate Cauchy product truncated to the smaller total degree.
    friend PowerSeries2 operator*(const PowerSeries2 &a, const PowerSeries2 &b)
    {
        const int n = std::min(a.order(), b.order());
        PowerSeries2 r(n);
        for (int p = 0; p <= n; ++p) {
            for (int q = 0; p + q <= n; ++q) {
                const cplx apq = a(p, q);
                if (apq == cplx{0.0}) {
                    continue;
                }
                const int rest = n - p - q;
                for (int s = 0; s <= rest; ++s) {
                    for (int t = 0; s + t <= rest; ++t) {
                        r.m_coeffs[r.index(p + s, q + t)] += apq * b(s, t);
                    }
                }
            }
        }
        return std::move(r).with_flag(a.m_symmetric && b.m_symmetric);
    }

private:
    static int check_order(int order)
    {
        detail::require(order >= 0, "PowerSeries2: order must be nonnegative");
        return order;
    }

    std::size_t side() const
    {
        return static_cast<std::size_t>(m_order) + 1;
    }

    std::size_t index(int j, int k) const
    {
        return static_cast<std::size_t>(j) * side() + static_cast<std::size_t>(k);
    }

    void mark_symmetric()
    {
        const double tol = 1e-10 * std::max(1.0, max_abs());
        detail::require(is_symmetric(tol), "PowerSeries2: symmetry flag set on a non-symmetric grid");
        m_symmetric = true;
    }

    PowerSeries2 with_flag(bool symmetric) &&
    {
        m_symmetric = symmetric;
        return std::move(*this);
    }

    int m_order;
    bool m_symmetric;
    std::vector<cplx> m_coeffs;
};

enum class Var { z, w };

enum class Factor { z_minus_w, z, w };

namespace detail
{

inline void check_unit_constant(cplx c0)
{
    if (std::abs(c0) < tol_const) {
        throw precondition_error("series log: zero constant term");
    }
    if (std::abs(c0 - 1.0) > tol_const) {
        throw precondition_error("series log: constant term is not 1");
    }
}

} // namespace detail

// log a, from a * L' = a' solved term by term. Requires a_0 = 1.
inline PowerSeries1 log(const PowerSeries1 &a)
{
    detail::check_unit_constant(a[0]);
    const int n = a.order();
    std::vector<cplx> L(static_cast<std::size_t>(n) + 1, cplx{0.0});
    L[0] = std::log(a[0]);
    for (int m = 1; m <= n; ++m) {
        cplx acc = static_cast<double>(m) * a[m];
        for (int k = 1; k < m; ++k) {
            acc -= static_cast<double>(k) * L[k] * a[m - k];
        }
        L[m] = acc / (static_cast<double>(m) * a[0]);
    }
    return PowerSeries1(n, std::move(L));
}

inline PowerSeries1 exp(const PowerSeries1 &L)
{
    const int n = L.order();
    std::vector<cplx> e(static_cast<std::size_t>(n) + 1, cplx{0.0});
    e[0] = std::exp(L[0]);
    for (int m = 1; m <= n; ++m) {
        cplx acc{0.0};
        for (int k = 1; k <= m; ++k) {
            acc += static_cast<double>(k) * L[k] * e[m - k];
        }
        e[m] = acc / static_cast<double>(m);
    }
    return PowerSeries1(n, std::move(e));
}

// 1/a; requires a_0 != 0.
inline PowerSeries1 reciprocal(const PowerSeries1 &a)
{
    detail::require(a[0] != cplx{0.0}, "series reciprocal: zero constant term");
    const int n = a.order();
    std::vector<cplx> b(static_cast<std::size_t>(n) + 1, cplx{0.0});
    b[0] = 1.0 / a[0];
    for (int m = 1; m <= n; ++m) {
        cplx acc{0.0};
        for (int k = 1; k <= m; ++k) {
            acc += a[k] * b[m - k];
        }
        b[m] = -acc * b[0];
    }
    return PowerSeries1(n, std::move(b));
}

// Bivariate log via the Euler operator E = z d/dz + w d/dw: a * E(L) = E(a),
// solved in order of increasing total degree.
inline PowerSeries2 log(const PowerSeries2 &a)
{
    detail::check_unit_constant(a(0, 0));
    const int n = a.order();
    std::vector<cplx> L(static_cast<std::size_t>(n + 1) * (n + 1), cplx{0.0});
    auto at = [&](int j, int k) -> cplx & { return L[static_cast<std::size_t>(j) * (n + 1) + k]; };
    at(0, 0) = std::log(a(0, 0));
    for (int s = 1; s <= n; ++s) {
        for (int j = 0; j <= s; ++j) {
            const int k = s - j;
            cplx acc = static_cast<double>(s) * a(j, k);
            for (int p = 0; p <= j; ++p) {
                for (int q = 0; q <= k; ++q) {
                    if (p == 0 && q == 0) {
                        continue;
                    }
                    const int rest = s - p - q;
                    if (rest == 0) {
                        continue;
                    }
                    acc -= a(p, q) * static_cast<double>(rest) * at(j - p, k - q);
                }
            }
            at(j, k) = acc / (static_cast<double>(s) * a(0, 0));
        }
    }
    return PowerSeries2(n, std::move(L));
}

inline PowerSeries2 exp(const PowerSeries2 &L)
{
    const int n = L.order();
    std::vector<cplx> e(static_cast<std::size_t>(n + 1) * (n + 1), cplx{0.0});
    auto at = [&](int j, int k) -> cplx & { return e[static_cast<std::size_t>(j) * (n + 1) + k]; };
    at(0, 0) = std::exp(L(0, 0));
    for (int s = 1; s <= n; ++s) {
        for (int j = 0; j <= s; ++j) {
            const int k = s - j;
            cplx acc{0.0};
            for (int p = 0; p <= j; ++p) {
                for (int q = 0; q <= k; ++q) {
                    if (p + q == 0) {
                        continue;
                    }
                    acc += static_cast<double>(p + q) * L(p, q) * at(j - p, k - q);
                }
            }
            at(j, k) = acc / static_cast<double>(s);
        }
    }
    return PowerSeries2(n, std::move(e));
}

// Formal derivative; the order drops by one (an order-0 input yields the
// zero series of order 0).
inline PowerSeries1 derivative(const PowerSeries1 &a)
{
    const int n = std::max(a.order() - 1, 0);
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1, cplx{0.0});
    for (int j = 0; j + 1 <= a.order(); ++j) {
        c[j] = static_cast<double>(j + 1) * a[j + 1];
    }
    return PowerSeries1(n, std::move(c));
}

inline PowerSeries2 derivative(const PowerSeries2 &a, Var var)
{
    const int n = std::max(a.order() - 1, 0);
    if (a.order() == 0) {
        return PowerSeries2(0);
    }
    if (var == Var::z) {
        return PowerSeries2::generate(n, [&](int j, int k) { return static_cast<double>(j + 1) * a(j + 1, k); });
    }
    return PowerSeries2::generate(n, [&](int j, int k) { return static_cast<double>(k + 1) * a(j, k + 1); });
}

// (diag f)(z) = f(z, z).
inline PowerSeries1 diagonal(const PowerSeries2 &f)
{
    const int n = f.order();
    std::vector<cplx> d(static_cast<std::size_t>(n) + 1, cplx{0.0});
    for (int l = 0; l <= n; ++l) {
        for (int j = 0; j <= l; ++j) {
            d[l] += f(j, l - j);
        }
    }
    return PowerSeries1(n, std::move(d));
}

// (phi(z) - phi(w)) / (z - w) = sum_n a_n sum_{i+j=n-1} z^i w^j, exact.
// An order-N input determines the quotient to order N - 1.
inline PowerSeries2 divided_difference(const PowerSeries1 &phi)
{
    detail::require(phi.order() >= 1, "divided_difference: series of order >= 1 required");
    return PowerSeries2::generate(
        phi.order() - 1, [&](int i, int j) { return phi[i + j + 1]; }, true);
}

// Exact product with z, w or (z - w); the order rises by one.
inline PowerSeries2 multiply_by_factor(const PowerSeries2 &f, Factor factor)
{
    const int n = f.order() + 1;
    auto get = [&](int j, int k) { return (j >= 0 && k >= 0 && j + k <= f.order()) ? f(j, k) : cplx{0.0}; };
    switch (factor) {
    case Factor::z:
        return PowerSeries2::generate(n, [&](int j, int k) { return get(j - 1, k); });
    case Factor::w:
        return PowerSeries2::generate(n, [&](int j, int k) { return get(j, k - 1); });
    case Factor::z_minus_w:
        break;
    }
    return PowerSeries2::generate(n, [&](int j, int k) { return get(j - 1, k) - get(j, k - 1); });
}

// z^a w^b f; the order rises by a + b.
inline PowerSeries2 shift(const PowerSeries2 &f, int a, int b)
{
    detail::require(a >= 0 && b >= 0, "shift: negative exponent");
    return PowerSeries2::generate(f.order() + a + b, [&](int j, int k) {
        const int p = j - a;
        const int q = k - b;
        return (p >= 0 && q >= 0 && p + q <= f.order()) ? f(p, q) : cplx{0.0};
    });
}

// Exact quotient f / factor. The input must vanish on the factor's zero set
// up to tol_div, measured relative to max(1, max|c_jk|). The order drops by
// one.
inline PowerSeries2 divide_by_factor(const PowerSeries2 &f, Factor factor, double tol = tol_div)
{
    detail::require(f.order() >= 1, "divide_by_factor: series of order >= 1 required");
    const int n = f.order();
    const double scale = std::max(1.0, f.max_abs());
    double defect = 0.0;
    switch (factor) {
    case Factor::z:
        for (int k = 0; k <= n; ++k) {
            defect = std::max(defect, std::abs(f(0, k)));
        }
        break;
    case Factor::w:
        for (int j = 0; j <= n; ++j) {
            defect = std::max(defect, std::abs(f(j, 0)));
        }
        break;
    case Factor::z_minus_w: {
        const PowerSeries1 d = diagonal(f);
        defect = d.max_abs();
        break;
    }
    }
    if (defect > tol * scale) {
        throw precondition_error("divide_by_factor: input does not vanish on the factor's zero set (defect " +
                                 std::to_string(defect) + ")");
    }
    switch (factor) {
    case Factor::z:
        return PowerSeries2::generate(n - 1, [&](int j, int k) { return f(j + 1, k); });
    case Factor::w:
        return PowerSeries2::generate(n - 1, [&](int j, int k) { return f(j, k + 1); });
    case Factor::z_minus_w:
        break;
    }
    // f_{j+1,k} = q_{j,k} - q_{j+1,k-1}  =>  q_{j,k} = sum_{i=0}^{k} f_{j+1+i,k-i}.
    return PowerSeries2::generate(n - 1, [&](int j, int k) {
        cplx acc{0.0};
        for (int i = 0; i <= k; ++i) {
            acc += f(j + 1 + i, k - i);
        }
        return acc;
    });
}

} // namespace gafsym

#endif
