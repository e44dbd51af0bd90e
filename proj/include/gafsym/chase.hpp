#ifndef GAFSYM_CHASE_HPP
#define GAFSYM_CHASE_HPP

// The interval-reversal permutation pi_d: on consecutive intervals I_m,
// pi(j) = d^m - j, with
//   m = 2n-1:  I_m = [(d^{2n-1}+1)/(d+1), (d^{2n}-1)/(d+1)]
//   m = 2n:    I_m = [(d^{2n}+d)/(d+1),   (d^{2n+1}-d)/(d+1)]
// The antidiagonal sums of the induced coupling live only on l = d^m.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <gafsym/errors.hpp>
#include <gafsym/special.hpp>

namespace gafsym
{

struct ChaseInterval {
    int m;
    std::int64_t lo;
    std::int64_t hi;
    std::int64_t power; // d^m = lo + hi
};

namespace detail
{

inline std::int64_t checked_pow(std::int64_t d, int e)
{
    std::int64_t p = 1;
    for (int i = 0; i < e; ++i) {
        if (__builtin_mul_overflow(p, d, &p)) {
            throw precondition_error("chase: d^" + std::to_string(e) + " overflows 64-bit integers");
        }
    }
    return p;
}

inline std::int64_t exact_div(std::int64_t num, std::int64_t den)
{
    if (num % den != 0) {
        throw consistency_error("chase: interval endpoint is not integral");
    }
    return num / den;
}

} // namespace detail

class ChasePermutation
{
public:
    ChasePermutation(int d, int m_max) : m_d(d)
    {
        detail::require(d >= 3, "ChasePermutation: d must be at least 3");
        detail::require(m_max >= 1, "ChasePermutation: m_max must be at least 1");
        std::int64_t expected_lo = 1;
        for (int m = 1; m <= m_max; ++m) {
            const std::int64_t dm = detail::checked_pow(d, m);
            const std::int64_t dm1 = detail::checked_pow(d, m + 1);
            std::int64_t lo;
            std::int64_t hi;
            if (m % 2 == 1) {
                lo = detail::exact_div(dm + 1, d + 1);
                hi = detail::exact_div(dm1 - 1, d + 1);
            } else {
                lo = detail::exact_div(dm + d, d + 1);
                hi = detail::exact_div(dm1 - d, d + 1);
            }
            if (lo != expected_lo || hi < lo || lo + hi != dm) {
                throw consistency_error("ChasePermutation: intervals fail to tile 1..n_max under j -> d^m - j");
            }
            m_intervals.push_back({m, lo, hi, dm});
            expected_lo = hi + 1;
        }
    }

    int d() const
    {
        return m_d;
    }

    int m_max() const
    {
        return static_cast<int>(m_intervals.size());
    }

    std::int64_t n_max() const
    {
        return m_intervals.back().hi;
    }

    const std::vector<ChaseInterval> &intervals() const
    {
        return m_intervals;
    }

    const ChaseInterval &interval(int m) const
    {
        detail::require(m >= 1 && m <= m_max(), "ChasePermutation: interval index out of range");
        return m_intervals[static_cast<std::size_t>(m - 1)];
    }

    // Index m of the interval containing j.
    int interval_of(std::int64_t j) const
    {
        detail::require(j >= 1 && j <= n_max(), "ChasePermutation: index outside 1..n_max");
        const auto it = std::lower_bound(m_intervals.begin(), m_intervals.end(), j,
                                         [](const ChaseInterval &iv, std::int64_t x) { return iv.hi < x; });
        return it->m;
    }

    std::int64_t operator()(std::int64_t j) const
    {
        return interval(interval_of(j)).power - j;
    }

    // The map on 1..n_max as an array, pi[j-1] = pi(j).
    std::vector<std::int64_t> map() const
    {
        std::vector<std::int64_t> out(static_cast<std::size_t>(n_max()));
        for (const auto &iv : m_intervals) {
            for (std::int64_t j = iv.lo; j <= iv.hi; ++j) {
                out[static_cast<std::size_t>(j - 1)] = iv.power - j;
            }
        }
        return out;
    }

    // A permutation of 1..n: pi_d on every interval contained in 1..n, the
    // identity on the remainder. Suitable for GafCoupling::permutation.
    std::vector<int> coupling_permutation(int n) const
    {
        detail::require(n >= 1 && n <= n_max(), "coupling_permutation: n must lie in 1..n_max");
        std::vector<int> pi(static_cast<std::size_t>(n));
        for (int j = 1; j <= n; ++j) {
            pi[j - 1] = j;
        }
        for (const auto &iv : m_intervals) {
            if (iv.hi > n) {
                break;
            }
            for (std::int64_t j = iv.lo; j <= iv.hi; ++j) {
                pi[static_cast<std::size_t>(j - 1)] = static_cast<int>(iv.power - j);
            }
        }
        return pi;
    }

    // Largest n such that 1..n is a union of complete intervals.
    int complete_prefix(int n) const
    {
        int best = 0;
        for (const auto &iv : m_intervals) {
            if (iv.hi <= n) {
                best = static_cast<int>(iv.hi);
            }
        }
        return best;
    }

private:
    int m_d;
    std::vector<ChaseInterval> m_intervals;
};

struct DiagonalSum {
    double sum;      // sum_{j in I_m} j^{-1/2} (d^m - j)^{-1/2}
    double error;    // |sum - incomplete_beta_sym(d)|
    double envelope; // d^{-m+1}
};

inline DiagonalSum diagonal_sum(const ChasePermutation &p, int m)
{
    const ChaseInterval &iv = p.interval(m);
    detail::neumaier_sum acc;
    const double dm = static_cast<double>(iv.power);
    for (std::int64_t j = iv.lo; j <= iv.hi; ++j) {
        const double x = static_cast<double>(j);
        acc.add(1.0 / std::sqrt(x * (dm - x)));
    }
    const double s = acc.value();
    return {s, std::abs(s - incomplete_beta_sym(p.d())), std::pow(static_cast<double>(p.d()), 1.0 - m)};
}

// (1/log d) (pi - 4 (d+1)^{-1/2} 2F1(1/2,1/2;3/2;1/(d+1)))^2.
inline double sigma2_formula(int d)
{
    detail::require(d >= 3, "sigma2_formula: d must be at least 3");
    const double b = incomplete_beta_sym(d);
    return b * b / std::log(static_cast<double>(d));
}

// Maximizer of sigma2_formula over d_lo..d_hi.
inline int sigma2_argmax(int d_lo, int d_hi)
{
    detail::require(3 <= d_lo && d_lo <= d_hi, "sigma2_argmax: invalid range");
    int best = d_lo;
    double best_v = sigma2_formula(d_lo);
    for (int d = d_lo + 1; d <= d_hi; ++d) {
        const double v = sigma2_formula(d);
        if (v > best_v) {
            best_v = v;
            best = d;
        }
    }
    return best;
}

struct Sigma2Series {
    std::vector<double> r;
    std::vector<double> ratio;       // sum_m r^{2 d^m} S_m^2 / log 1/(1-r^2)
    std::vector<double> diag_sums;   // S_m, m = 1..m_max
    double formula;
};

// Exact finite-m evaluation of the circle-mean ratio for the coupling built
// from pi_d. Requires d^{m_max} >= 1/(1 - r^2) for every r.
inline Sigma2Series sigma2_series_estimate(int d, const std::vector<double> &r_list, int m_max)
{
    const ChasePermutation p(d, m_max);
    Sigma2Series out;
    out.r = r_list;
    out.formula = sigma2_formula(d);
    for (int m = 1; m <= m_max; ++m) {
        out.diag_sums.push_back(diagonal_sum(p, m).sum);
    }
    const double dmax = static_cast<double>(p.interval(m_max).power);
    for (double r : r_list) {
        detail::require(r >= 0.0 && r < 1.0, "sigma2_series_estimate: r must lie in [0, 1)");
        const double s = r * r;
        if (s == 0.0) {
            out.ratio.push_back(0.0);
            continue;
        }
        detail::require(dmax * (1.0 - s) >= 1.0 - 1e-9,
                        "sigma2_series_estimate: m_max too small for the requested r");
        detail::neumaier_sum acc;
        const double log_s = std::log(s);
        for (int m = 1; m <= m_max; ++m) {
            const double weight = std::exp(static_cast<double>(p.interval(m).power) * log_s);
            acc.add(weight * out.diag_sums[m - 1] * out.diag_sums[m - 1]);
        }
        out.ratio.push_back(acc.value() / -std::log1p(-s));
    }
    return out;
}

} // namespace gafsym

#endif
