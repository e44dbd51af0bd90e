#ifndef GAFSYM_SUITES_HPP
#define GAFSYM_SUITES_HPP

// Named verification suites behind the command-line tool. A suite takes a
// flat set of typed parameters (unknown keys are rejected, missing keys take
// their defaults) and produces one BoundReport whose params hold the fully
// resolved configuration.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <gafsym/bounds.hpp>
#include <gafsym/chase.hpp>
#include <gafsym/errors.hpp>
#include <gafsym/gaf.hpp>
#include <gafsym/grunsky.hpp>
#include <gafsym/matrix.hpp>
#include <gafsym/parallel.hpp>
#include <gafsym/report.hpp>
#include <gafsym/rng.hpp>
#include <gafsym/symbols.hpp>

namespace gafsym
{

struct SuiteConfig {
    std::string suite;
    json params = json::object();
    std::uint64_t seed = 0;
    std::string out;               // empty: standard output
    std::string format = "json";   // json | csv
};

inline const std::vector<std::string> &suite_names()
{
    static const std::vector<std::string> names{"bounds", "chase",     "grunsky",   "symbols",
                                                "gaf",    "cue",       "expansion", "mockbloch"};
    return names;
}

namespace detail
{

inline std::vector<double> default_unit_grid()
{
    return {0.5, 0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999999};
}

// r with 1 - r^2 = 10^-k, k = 1..6.
inline std::vector<double> default_chase_r_grid()
{
    std::vector<double> r;
    for (int k = 1; k <= 6; ++k) {
        r.push_back(std::sqrt(1.0 - std::pow(10.0, -k)));
    }
    return r;
}

inline json suite_defaults(const std::string &suite)
{
    if (suite == "bounds") {
        return {{"suite", "all"},       {"mode", "corpus"},  {"d", 0},
                {"trunc", 256},         {"trials", 1},       {"s_grid", default_unit_grid()},
                {"r_grid", default_unit_grid()}};
    }
    if (suite == "chase") {
        return {{"d", 29},     {"mode", "formula"},          {"m_max", 5},
                {"d_min", 3},  {"d_max", 200},               {"r_grid", default_chase_r_grid()}};
    }
    if (suite == "grunsky") {
        return {{"map", "identity"}, {"check", "all"}, {"trunc", 24}, {"c", {0.3, 0.0}}, {"coeffs", {0.1}}};
    }
    if (suite == "symbols") {
        return {{"trunc", 16}, {"trials", 20}, {"working_order", 64}, {"a_max", 0.4}};
    }
    if (suite == "gaf") {
        return {{"mode", "all"}, {"trunc", 6}, {"trials", 100000}};
    }
    if (suite == "cue") {
        return {{"trunc", 64}, {"trials", 2000}, {"r_grid", {0.3, 0.6}}};
    }
    if (suite == "expansion") {
        return {{"trials", 100}, {"degree", 8}, {"n_max", 20}};
    }
    if (suite == "mockbloch") {
        return {{"levels", 6}, {"growth", 2.0}, {"r1", 0.5}, {"order", 64}, {"threshold", 0.0}};
    }
    throw precondition_error("unknown suite '" + suite + "'");
}

inline bool compatible(const json &def, const json &v)
{
    if (def.is_number_integer()) {
        return v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
    }
    if (def.is_number()) {
        return v.is_number();
    }
    if (def.is_array()) {
        return v.is_array() && std::all_of(v.begin(), v.end(), [](const json &x) { return x.is_number(); });
    }
    return def.type() == v.type();
}

inline json resolve_params(const SuiteConfig &cfg)
{
    json p = suite_defaults(cfg.suite);
    require(cfg.params.is_object(), "suite parameters must be a key-value object");
    for (const auto &[key, value] : cfg.params.items()) {
        if (!p.contains(key)) {
            throw precondition_error("unknown parameter '" + key + "' for suite " + cfg.suite);
        }
        if (!compatible(p[key], value)) {
            throw precondition_error("parameter '" + key + "' has the wrong type");
        }
        p[key] = p[key].is_number_integer() ? json(static_cast<std::int64_t>(value.get<double>())) : value;
    }
    return p;
}

inline int positive_int(const json &p, const char *key, int lo = 1)
{
    const auto v = p.at(key).get<std::int64_t>();
    if (v < lo || v > (1 << 30)) {
        throw precondition_error(std::string("parameter '") + key + "' must be at least " + std::to_string(lo));
    }
    return static_cast<int>(v);
}

inline std::vector<double> unit_grid(const json &p, const char *key)
{
    auto g = p.at(key).get<std::vector<double>>();
    require(!g.empty(), std::string("parameter '") + key + "' must not be empty");
    for (double x : g) {
        require(x >= 0.0 && x < 1.0, std::string("parameter '") + key + "' values must lie in [0, 1)");
    }
    return g;
}

inline cplx complex_param(const json &p, const char *key)
{
    const auto v = p.at(key).get<std::vector<double>>();
    require(v.size() == 1 || v.size() == 2, std::string("parameter '") + key + "' takes re or re,im");
    return {v[0], v.size() == 2 ? v[1] : 0.0};
}

inline std::vector<int> one_based(const std::vector<int> &p)
{
    std::vector<int> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i] = p[i] + 1;
    }
    return out;
}

// Smallest ChasePermutation covering 1..n.
inline ChasePermutation chase_covering(int d, int n)
{
    for (int m = 1;; ++m) {
        ChasePermutation p(d, m);
        if (p.n_max() >= n) {
            return p;
        }
    }
}

// Rows (kind, case, x, lhs, rhs) from a grid report whose checks follow the grid.
inline void append_grid_rows(Curve &curve, double kind, double index, const std::vector<double> &grid,
                             const BoundReport &rep)
{
    for (std::size_t i = 0; i < grid.size() && i < rep.checks().size(); ++i) {
        curve.rows.push_back({kind, index, grid[i], rep.checks()[i].lhs, rep.checks()[i].rhs});
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// bounds

struct BoundsCase {
    std::string name;
    GafCoupling coupling;
};

// mode: permutation (random, or pi_d when d >= 3), contraction, partial_isometry,
// unitary, sesquianalytic, conjugate_reflect, identical, independent, or
// corpus, which cycles through the permutation/contraction/reflection kinds.
inline BoundsCase bounds_case(const std::string &mode, std::size_t t, int n, int d, std::uint64_t seed)
{
    RngStream rng(seed, t);
    const auto contraction = [&](ContractionKind k) { return random_contraction(n, k, rng); };
    if (mode == "permutation") {
        if (d >= 3) {
            return {"chase_d" + std::to_string(d),
                    GafCoupling::permutation(detail::chase_covering(d, n).coupling_permutation(n))};
        }
        return {"random_permutation", GafCoupling::permutation(detail::one_based(random_permutation(n, rng)))};
    }
    if (mode == "contraction") {
        return {"ginibre_scaled", GafCoupling::analytic(contraction(ContractionKind::ginibre_scaled))};
    }
    if (mode == "partial_isometry") {
        return {"partial_isometry", GafCoupling::analytic(contraction(ContractionKind::partial_isometry))};
    }
    if (mode == "unitary") {
        return {"unitary", GafCoupling::analytic(contraction(ContractionKind::unitary))};
    }
    if (mode == "sesquianalytic") {
        return {"sesquianalytic", GafCoupling::sesquianalytic(contraction(ContractionKind::ginibre_scaled))};
    }
    if (mode == "conjugate_reflect") {
        return {"conjugate_reflect", GafCoupling::conjugate_reflect(n)};
    }
    if (mode == "identical") {
        return {"identical", GafCoupling::identical(n)};
    }
    if (mode == "independent") {
        return {"independent", GafCoupling::independent(n)};
    }
    if (mode == "corpus") {
        switch (t % 6) {
        case 0:
            return bounds_case("permutation", t, n, 0, seed);
        case 1:
            return bounds_case("contraction", t, n, 0, seed);
        case 2:
            return bounds_case("partial_isometry", t, n, 0, seed);
        case 3:
            return bounds_case("unitary", t, n, 0, seed);
        case 4:
            return bounds_case("permutation", t, n, 3 + static_cast<int>((t / 6) % 30), seed);
        default:
            return bounds_case("conjugate_reflect", t, n, 0, seed);
        }
    }
    throw precondition_error("bounds: unknown mode '" + mode + "'");
}

inline std::vector<cplx> fundamental_points()
{
    std::vector<cplx> zs{0.0};
    for (double r : {0.3, 0.5, 0.7, 0.9}) {
        for (double t : {0.0, 1.0, 2.5}) {
            zs.push_back(std::polar(r, t));
        }
    }
    return zs;
}

inline BoundReport run_bounds(const json &p, std::uint64_t seed)
{
    const std::string which = p.at("suite").get<std::string>();
    const std::string mode = p.at("mode").get<std::string>();
    const int n = detail::positive_int(p, "trunc");
    const int trials = detail::positive_int(p, "trials");
    const int d = detail::positive_int(p, "d", 0);
    const auto s_grid = detail::unit_grid(p, "s_grid");
    const auto r_grid = detail::unit_grid(p, "r_grid");
    const bool all = which == "all";
    detail::require(all || which == "series" || which == "circle" || which == "fundamental" || which == "phipsi",
                    "bounds: --suite must be series, circle, fundamental, phipsi or all");
    detail::require(d == 0 || d >= 3, "bounds: d must be 0 (random) or at least 3");
    bounds_case(mode, 0, 1, 0, seed); // validates the mode name

    const auto zs = fundamental_points();
    const std::vector<std::pair<cplx, cplx>> weights{{1.0, 0.0}, {0.0, 1.0}, {0.6, cplx{0.0, 0.8}}};
    const auto parts = parallel_map(static_cast<std::size_t>(trials), [&](std::size_t t) {
        const BoundsCase bc = bounds_case(mode, t, n, d, seed);
        std::vector<std::pair<std::string, BoundReport>> out;
        if (all || which == "series") {
            const auto fhat = CorrelationEvaluator(bc.coupling).analytic_diagonal();
            out.emplace_back("series", verify_series_bound(fhat, s_grid));
        }
        if (all || which == "circle") {
            out.emplace_back("circle", verify_circle_mean(bc.coupling, r_grid));
        }
        if (all || which == "phipsi") {
            out.emplace_back("phipsi", verify_phipsi(bc.coupling, r_grid));
        }
        if (all || which == "fundamental") {
            for (std::size_t i = 0; i < weights.size(); ++i) {
                out.emplace_back("fundamental_ab" + std::to_string(i),
                                 verify_fundamental_integral(bc.coupling, zs, weights[i].first, weights[i].second));
            }
        }
        return std::make_pair(bc.name, std::move(out));
    });

    BoundReport rep("bounds");
    rep.curve().columns = {"kind", "case", "x", "lhs", "rhs"};
    for (std::size_t t = 0; t < parts.size(); ++t) {
        const std::string prefix = "case" + std::to_string(t) + ":" + parts[t].first + "/";
        for (const auto &[kind, sub] : parts[t].second) {
            rep.merge(sub, prefix + kind + "/");
            const double idx = static_cast<double>(t);
            if (kind == "series") {
                detail::append_grid_rows(rep.curve(), 0.0, idx, s_grid, sub);
            } else if (kind == "circle") {
                detail::append_grid_rows(rep.curve(), 1.0, idx, r_grid, sub);
            } else if (kind == "phipsi") {
                detail::append_grid_rows(rep.curve(), 2.0, idx, r_grid, sub);
            }
        }
    }
    if (all || which == "fundamental") {
        // Extremal couplings: equality up to the truncation tail.
        const cplx z0 = 0.7;
        rep.merge(verify_fundamental_integral(GafCoupling::identical(n), {z0}, 0.0, 1.0, true),
                  "equality:identical/");
        rep.merge(verify_fundamental_integral(GafCoupling::conjugate_reflect(n), {z0}, 1.0, 0.0, true),
                  "equality:conjugate_reflect/");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// chase

inline BoundReport run_chase(const json &p, std::uint64_t seed)
{
    const int d = detail::positive_int(p, "d", 3);
    const std::string mode = p.at("mode").get<std::string>();
    const int m_max = detail::positive_int(p, "m_max");
    const int d_min = detail::positive_int(p, "d_min", 3);
    const int d_max = detail::positive_int(p, "d_max", 3);
    const bool all = mode == "all";
    detail::require(all || mode == "formula" || mode == "argmax" || mode == "series" || mode == "intervals",
                    "chase: --mode must be formula, argmax, series, intervals or all");
    BoundReport rep("chase");

    if (all || mode == "formula") {
        const double x = 1.0 / (d + 1.0);
        const double series = hyp2f1_half_series(x);
        const double closed = hyp2f1_half_closed(x);
        rep.add_eq("hyp2f1_series_vs_closed_form", series, closed, 1e-12);
        const double v = sigma2_formula(d);
        rep.add_flag("sigma2_finite_positive", std::isfinite(v) && v > 0.0);
        if (d == 29) {
            rep.add_ge("sigma2_lower", v, 1.7205, 0.0);
            rep.add_le("sigma2_upper", v, 1.7211, 0.0);
        }
    }
    if (all || mode == "argmax") {
        detail::require(d_min <= d_max, "chase: d_min must not exceed d_max");
        const int best = sigma2_argmax(d_min, d_max);
        rep.add_exact("argmax_over_range_equals_d", best, d, best == d);
    }
    if (all || mode == "series") {
        const auto r_grid = detail::unit_grid(p, "r_grid");
        const Sigma2Series est = sigma2_series_estimate(d, r_grid, m_max);
        rep.curve().columns = {"r", "ratio", "formula_value"};
        std::size_t deepest = 0;
        for (std::size_t i = 0; i < est.r.size(); ++i) {
            rep.curve().rows.push_back({est.r[i], est.ratio[i], est.formula});
            if (est.r[i] > est.r[deepest]) {
                deepest = i;
            }
        }
        rep.add_le("relative_gap_at_deepest_r", std::abs(est.ratio[deepest] / est.formula - 1.0), 0.10, 0.0);
    }
    if (all || mode == "intervals") {
        const ChasePermutation perm(d, m_max);
        // Involution on a sample of 1..n_max (all of it when small).
        RngStream rng(seed, 0);
        const std::int64_t n_max = perm.n_max();
        bool involution = true;
        const auto probe = [&](std::int64_t j) {
            const std::int64_t pj = perm(j);
            involution = involution && pj >= 1 && pj <= n_max && perm(pj) == j;
        };
        if (n_max <= 1000000) {
            for (std::int64_t j = 1; j <= n_max; ++j) {
                probe(j);
            }
        } else {
            for (const auto &iv : perm.intervals()) {
                probe(iv.lo);
                probe(iv.hi);
            }
            for (int i = 0; i < 100000; ++i) {
                probe(1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n_max))));
            }
        }
        rep.add_flag("involution", involution);
        // Antidiagonal mass of the induced coupling sits on powers of d only.
        const int n = perm.complete_prefix(std::min<std::int64_t>(n_max, 2000));
        if (n >= 1) {
            const auto fhat = CorrelationEvaluator(GafCoupling::permutation(perm.coupling_permutation(n)))
                                  .analytic_diagonal();
            double off = 0.0;
            for (std::size_t l = 0; l < fhat.size(); ++l) {
                bool power = false;
                for (const auto &iv : perm.intervals()) {
                    power = power || iv.power == static_cast<std::int64_t>(l);
                }
                if (!power) {
                    off = std::max(off, std::abs(fhat[l]));
                }
            }
            rep.add_exact("off_power_antidiagonal_mass", off, 0.0, off == 0.0);
        }
        double worst_c = 0.0;
        for (int m = 1; m <= m_max; ++m) {
            const DiagonalSum ds = diagonal_sum(perm, m);
            worst_c = std::max(worst_c, ds.error / ds.envelope);
            rep.add_flag("diagonal_sum_finite_m=" + std::to_string(m), std::isfinite(ds.sum));
            if (m > 1) {
                const DiagonalSum prev = diagonal_sum(perm, m - 1);
                rep.add_le("diagonal_sum_error_decreases_m=" + std::to_string(m), ds.error, prev.error, 0.0);
            }
        }
        rep.params()["measured_envelope_constant"] = worst_c;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// grunsky

inline ConformalMap catalog_map(const std::string &name, int order, cplx c, const std::vector<double> &coeffs)
{
    if (name == "identity") {
        return ConformalMap::identity(order);
    }
    if (name == "koebe") {
        return ConformalMap::koebe(order);
    }
    if (name == "cayley") {
        return ConformalMap::cayley_like(c, order);
    }
    if (name == "poly") {
        return ConformalMap::polynomial(std::vector<cplx>(coeffs.begin(), coeffs.end()), order);
    }
    throw precondition_error("grunsky: unknown map '" + name + "'");
}

inline BoundReport grunsky_checks(const ConformalMap &phi, int n, const std::string &check)
{
    const bool all = check == "all";
    BoundReport rep("grunsky");
    const GrunskySymbol q = grunsky_symbol(phi, n);
    if (all || check == "symbol") {
        rep.add_flag("symbol_vanishes_on_axes_and_is_symmetric", grunsky_invariants_hold(q.Q));
        rep.add_eq("diagonal_matches_direct_formula", (diagonal(q.Q) - grunsky_diagonal_direct(phi, n)).max_abs(),
                   0.0, 1e-12);
    }
    if (all || check == "nlw") {
        rep.add_eq("nlw_residual_max", nlw_residual(q).max_abs(), 0.0, nlw_tol);
    }
    if (all || check == "matrix") {
        const ContractionMatrix g = grunsky_matrix(phi, std::max(1, n / 2));
        rep.add_le("grunsky_norm", g.norm_certificate(), 1.0, contraction_slack);
    }
    if (all || check == "reconstruct") {
        const ConformalMap back = reconstruct_map(q, n, phi.series()[2]);
        rep.add_eq("map_round_trip", (back.series() - phi.series().truncated(n + 1)).max_abs(), 0.0,
                   reconstruct_residual_limit);
        const GrunskySymbol q2 = grunsky_symbol(back, n);
        rep.add_eq("symbol_round_trip", (q2.Q - q.Q).max_abs(), 0.0, reconstruct_residual_limit);
    }
    return rep;
}

inline BoundReport run_grunsky(const json &p, std::uint64_t)
{
    const std::string map = p.at("map").get<std::string>();
    const std::string check = p.at("check").get<std::string>();
    const int n = detail::positive_int(p, "trunc", 2);
    detail::require(check == "all" || check == "symbol" || check == "nlw" || check == "matrix"
                        || check == "reconstruct",
                    "grunsky: --check must be symbol, nlw, matrix, reconstruct or all");
    const cplx c = detail::complex_param(p, "c");
    const auto coeffs = p.at("coeffs").get<std::vector<double>>();
    BoundReport rep("grunsky");
    if (map == "catalog") {
        const std::vector<std::pair<std::string, ConformalMap>> maps{
            {"identity", ConformalMap::identity(n + 1)},
            {"koebe", ConformalMap::koebe(n + 1)},
            {"cayley_0.3", ConformalMap::cayley_like(0.3, n + 1)},
            {"cayley_0.7i", ConformalMap::cayley_like(cplx{0.0, 0.7}, n + 1)},
            {"poly_0.1", ConformalMap::polynomial({0.1}, n + 1)}};
        for (const auto &[name, phi] : maps) {
            rep.merge(grunsky_checks(phi, n, check), name + "/");
        }
    } else {
        rep.merge(grunsky_checks(catalog_map(map, n + 1, c, coeffs), n, check));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// symbols: transfer consistency and the Moebius identity on random pairs

inline MobiusMap random_mobius(double a_max, RngStream &rng)
{
    const double rad = a_max * std::sqrt(rng.uniform());
    const double arg = 2.0 * std::numbers::pi * rng.uniform();
    return {std::polar(rad, arg), 2.0 * std::numbers::pi * rng.uniform()};
}

inline BoundReport run_symbols(const json &p, std::uint64_t seed)
{
    const int n = detail::positive_int(p, "trunc");
    const int trials = detail::positive_int(p, "trials");
    const int m = detail::positive_int(p, "working_order");
    const double a_max = p.at("a_max").get<double>();
    detail::require(a_max >= 0.0 && a_max < 1.0, "symbols: a_max must lie in [0, 1)");
    const auto parts = parallel_map(static_cast<std::size_t>(trials), [&](std::size_t t) {
        RngStream rng(seed, t);
        const auto kind = static_cast<ContractionKind>(t % 3);
        const ContractionMatrix a = random_contraction(n, kind, rng);
        const MobiusMap phi = random_mobius(a_max, rng);
        std::vector<cplx> pts;
        for (int i = 0; i < 6; ++i) {
            pts.push_back(std::polar(0.6 * std::sqrt(rng.uniform()), 2.0 * std::numbers::pi * rng.uniform()));
        }
        BoundReport r("symbols");
        const DirichletSymbol sym = symbol_from_contraction(a, n);
        const PowerSeries2 corr = exact_analytic_correlation(coupling_from_contraction(a));
        const double diff = (corr - sym.W).max_abs();
        r.add_exact("transfer_symbol_equals_analytic_correlation", diff, 0.0, diff == 0.0);
        r.add_flag("symbol_invariants", symbol_invariants_hold(sym));
        r.merge(verify_mobius_identity(a, phi, pts, m), "mobius/");
        return r;
    });
    BoundReport rep("symbols");
    for (std::size_t t = 0; t < parts.size(); ++t) {
        rep.merge(parts[t], "case" + std::to_string(t) + "/");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// gaf: Monte Carlo covariances, PSD sanity, the triangle bound

inline std::vector<std::pair<std::string, GafCoupling>> gaf_couplings(const std::string &mode, int n,
                                                                       std::uint64_t seed)
{
    RngStream rng(seed, 1u << 20);
    std::vector<std::pair<std::string, GafCoupling>> out;
    const bool all = mode == "all";
    if (all || mode == "independent") {
        out.emplace_back("independent", GafCoupling::independent(n));
    }
    if (all || mode == "identical") {
        out.emplace_back("identical", GafCoupling::identical(n));
    }
    if (all || mode == "conjugate_reflect") {
        out.emplace_back("conjugate_reflect", GafCoupling::conjugate_reflect(n));
    }
    if (all || mode == "permutation") {
        out.emplace_back("permutation", GafCoupling::permutation(detail::one_based(random_permutation(n, rng))));
    }
    if (all || mode == "analytic") {
        out.emplace_back("analytic", GafCoupling::analytic(random_contraction(n, ContractionKind::ginibre_scaled, rng)));
    }
    if (all || mode == "sesquianalytic") {
        out.emplace_back("sesquianalytic",
                         GafCoupling::sesquianalytic(random_contraction(n, ContractionKind::ginibre_scaled, rng)));
    }
    detail::require(!out.empty(), "gaf: unknown mode '" + mode + "'");
    return out;
}

// 25 point pairs inside the disk (radius <= 0.9), deterministic.
inline std::vector<std::pair<cplx, cplx>> psd_pairs()
{
    std::vector<std::pair<cplx, cplx>> out;
    const double radii[5] = {0.0, 0.3, 0.55, 0.75, 0.9};
    for (int i = 0; i < 5; ++i) {
        for (int k = 0; k < 5; ++k) {
            out.emplace_back(std::polar(radii[i], 0.7 * k), std::polar(radii[(i + k) % 5], 1.9 * i + 0.4));
        }
    }
    return out;
}

// Monte Carlo estimates of E alpha_j beta_k and E alpha_j conj(beta_k) against
// the exact matrices, each within 5 standard errors.
inline BoundReport coefficient_covariance_check(const GafCoupling &c, int draws, const RngStream &rng)
{
    const int n = c.trunc();
    const CouplingSampler sampler(c);
    const auto samples = parallel_map(static_cast<std::size_t>(draws), [&](std::size_t i) {
        RngStream s = rng.split(i);
        return sampler.draw(s);
    });
    const CorrelationEvaluator eval(c);
    BoundReport r("covariance");
    for (int j = 1; j <= n; ++j) {
        for (int k = 1; k <= n; ++k) {
            std::vector<cplx> xa(samples.size());
            std::vector<cplx> xs(samples.size());
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const auto &[alpha, beta] = samples[i];
                xa[i] = alpha(j - 1) * beta(k - 1);
                xs[i] = alpha(j - 1) * std::conj(beta(k - 1));
            }
            const auto [ma, sea] = jackknife_mean(xa);
            const auto [ms, ses] = jackknife_mean(xs);
            const std::string at = "(" + std::to_string(j) + "," + std::to_string(k) + ")";
            const double da = std::abs(ma - eval.analytic_matrix()(k - 1, j - 1));
            const double ds = std::abs(ms - eval.sesqui_matrix()(k - 1, j - 1));
            r.add_le("analytic" + at, da, 5.0 * sea, 0.0);
            r.add_le("sesquianalytic" + at, ds, 5.0 * ses, 0.0);
        }
    }
    return r;
}

inline BoundReport run_gaf(const json &p, std::uint64_t seed)
{
    const std::string mode = p.at("mode").get<std::string>();
    const int n = detail::positive_int(p, "trunc");
    const int draws = detail::positive_int(p, "trials", 2);
    const auto couplings = gaf_couplings(mode, n, seed);
    const auto pairs = psd_pairs();
    BoundReport rep("gaf");
    for (std::size_t ci = 0; ci < couplings.size(); ++ci) {
        const auto &[name, c] = couplings[ci];
        const std::string prefix = name + "/";
        rep.merge(coefficient_covariance_check(c, draws, RngStream(seed, ci)), prefix + "covariance/");
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            rep.merge(corr_matrix_psd_check(c, pairs[i].first, pairs[i].second),
                      prefix + "psd/pair" + std::to_string(i) + "/");
        }
        rep.merge(triangle_bound_check(c, pairs), prefix);
        // Tripling the analytic kernel must break positivity whenever the
        // coupling carries analytic correlation of full strength.
        if (CorrelationEvaluator(c).analytic_matrix().norm() > 0.0 && c.mode() != CouplingMode::analytic_contraction) {
            double worst = 0.0;
            for (const auto &[z, w] : pairs) {
                worst = std::min(worst, psd_check(correlation_matrix_8x8(c, z, w, 3.0), psd_tol).min_eigenvalue);
            }
            rep.add_le(prefix + "tripled_analytic_kernel_rejected", worst, -psd_tol, 0.0);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// cue

inline BoundReport run_cue(const json &p, std::uint64_t seed)
{
    const int n = detail::positive_int(p, "trunc", 2);
    const int samples = detail::positive_int(p, "trials");
    const auto radii = detail::unit_grid(p, "r_grid");
    std::vector<cplx> pts;
    for (double r : radii) {
        detail::require(r <= 0.8, "cue: grid radius must not exceed 0.8");
        for (int k = 0; k < 4; ++k) {
            pts.push_back(std::polar(r, 0.5 * std::numbers::pi * k + 0.3));
        }
    }
    const CueResult res = cue_log_char(n, pts, samples, RngStream(seed, 0));
    BoundReport rep("cue");
    rep.add_le("sesquianalytic_kernel_max_deviation", res.max_sesqui_dev, 0.05, 0.0);
    rep.add_le("analytic_self_correlation_max_abs", res.max_analytic_dev, 0.05, 0.0);
    return rep;
}

// ---------------------------------------------------------------------------
// expansion

inline PowerSeries2 random_bivariate_polynomial(int degree, RngStream &rng)
{
    return PowerSeries2::generate(degree, [&](int j, int k) {
        return j + k <= degree ? rng.complex_gaussian() : cplx{0.0};
    });
}

inline BoundReport run_expansion(const json &p, std::uint64_t seed)
{
    const int trials = detail::positive_int(p, "trials");
    const int degree = detail::positive_int(p, "degree", 0);
    const int n_max = detail::positive_int(p, "n_max", 0);
    detail::require(degree <= expansion_max_degree, "expansion: degree must not exceed 12");
    const auto parts = parallel_map(static_cast<std::size_t>(trials), [&](std::size_t t) {
        RngStream rng(seed, t);
        const int deg = static_cast<int>(t % static_cast<std::size_t>(degree + 1));
        BoundReport r = diagonal_expansion_check(random_bivariate_polynomial(deg, rng));
        std::vector<cplx> c(static_cast<std::size_t>(deg) + 1);
        for (auto &x : c) {
            x = rng.complex_gaussian();
        }
        r.merge(littlewood_paley_check(PowerSeries1(deg, std::move(c))), "littlewood_paley/");
        return r;
    });
    BoundReport rep("expansion");
    for (std::size_t t = 0; t < parts.size(); ++t) {
        rep.merge(parts[t], "poly" + std::to_string(t) + "/");
    }
    // f = zw: the terms are 1/6, 1/30, 3/10 and sum to 1/2.
    const ExpansionResult zw = diagonal_expansion(PowerSeries2::monomial(2, 1, 1));
    const double expected[3] = {1.0 / 6.0, 1.0 / 30.0, 3.0 / 10.0};
    for (int i = 0; i < 3; ++i) {
        rep.add_eq("zw/term" + std::to_string(i), zw.terms.size() > 2 ? zw.terms[i] : 0.0, expected[i], 1e-15);
    }
    rep.add_eq("zw/sum", zw.rhs, 0.5, 1e-15);
    rep.add_eq("zw/lhs", zw.lhs, 0.5, 1e-15);
    rep.merge(combinatorial_identity_check(n_max), "combinatorial/");
    return rep;
}

// ---------------------------------------------------------------------------
// mockbloch

inline BoundReport run_mockbloch(const json &p, std::uint64_t)
{
    MockBlochPolicy policy;
    policy.growth = p.at("growth").get<double>();
    policy.r1 = p.at("r1").get<double>();
    detail::require(policy.growth >= 1.0, "mockbloch: growth must be at least 1");
    const int levels = detail::positive_int(p, "levels", 2);
    const int order = detail::positive_int(p, "order");
    const MockBlochResult mb = mock_bloch_construct(levels, policy, order);
    BoundReport rep = mock_bloch_report(mb, p.at("threshold").get<double>());
    rep.curve().columns = {"level", "T", "bloch", "bloch_lower"};
    for (std::size_t l = 0; l < mb.T.size(); ++l) {
        rep.curve().rows.push_back({static_cast<double>(l + 1), mb.T[l], mb.bloch[l], mb.bloch_lower[l]});
    }
    return rep;
}

// ---------------------------------------------------------------------------

// Runs the named suite. Configuration errors surface as precondition_error.
inline BoundReport run_suite(const SuiteConfig &cfg)
{
    const json p = detail::resolve_params(cfg);
    detail::require(cfg.format == "json" || cfg.format == "csv", "--format must be json or csv");
    static const std::map<std::string, std::function<BoundReport(const json &, std::uint64_t)>> table{
        {"bounds", run_bounds}, {"chase", run_chase},         {"grunsky", run_grunsky},
        {"symbols", run_symbols}, {"gaf", run_gaf},           {"cue", run_cue},
        {"expansion", run_expansion}, {"mockbloch", run_mockbloch}};
    BoundReport sub = table.at(cfg.suite)(p, cfg.seed);
    BoundReport rep(cfg.suite);
    json params = p;
    for (const auto &[k, v] : sub.params().items()) {
        params[k] = v;
    }
    rep.params() = std::move(params);
    rep.merge(sub);
    rep.curve() = sub.curve();
    rep.set_seed(cfg.seed);
    return rep;
}

inline int exit_code(const BoundReport &r)
{
    return r.all_pass() ? 0 : 1;
}

// JSON and CSV forms of every check, for reports without a grid curve.
inline Curve checks_curve(const BoundReport &r)
{
    Curve c{{"check", "lhs", "rhs", "margin", "pass"}, {}};
    for (std::size_t i = 0; i < r.checks().size(); ++i) {
        const Check &k = r.checks()[i];
        c.rows.push_back({static_cast<double>(i), k.lhs, k.rhs, k.margin, k.pass ? 1.0 : 0.0});
    }
    return c;
}

// json: the report goes to `out` (or `console` when out is empty).
// csv: the curve goes to `out` (or `console`); with a file target the JSON
// report is still printed to `console`.
inline void emit_report(const BoundReport &r, const std::string &format, const std::string &out,
                        std::ostream &console)
{
    const std::string text = to_json(r).dump(2) + "\n";
    const auto open = [&out]() {
        std::ofstream f(out, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw precondition_error("cannot open '" + out + "' for writing");
        }
        return f;
    };
    const auto finish = [&out](std::ofstream &f) {
        f.flush();
        if (!f) {
            throw precondition_error("failed writing '" + out + "'");
        }
    };
    if (format == "csv") {
        const Curve curve = r.curve().columns.empty() ? checks_curve(r) : r.curve();
        if (out.empty()) {
            write_csv(console, curve);
            return;
        }
        std::ofstream f = open();
        write_csv(f, curve);
        finish(f);
        console << text;
        return;
    }
    if (out.empty()) {
        console << text;
        return;
    }
    std::ofstream f = open();
    f << text;
    finish(f);
}

} // namespace gafsym

#endif
