#ifndef GAFSYM_REPORT_HPP
#define GAFSYM_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace gafsym
{

using json = nlohmann::json;

// One verified relation. pass holds exactly when margin >= -tol.
struct Check {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Tabular side data (one row per grid value), written as CSV on request.
struct Curve {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

class BoundReport
{
public:
    BoundReport() = default;

    explicit BoundReport(std::string suite) : m_suite(std::move(suite)) {}

    const std::string &suite() const
    {
        return m_suite;
    }

    json &params()
    {
        return m_params;
    }

    const json &params() const
    {
        return m_params;
    }

    void set_seed(std::uint64_t seed)
    {
        m_seed = seed;
    }

    std::optional<std::uint64_t> seed() const
    {
        return m_seed;
    }

    // lhs <= rhs, allowing a deficit of tol.
    const Check &add_le(std::string label, double lhs, double rhs, double tol)
    {
        const double margin = rhs - lhs;
        return push({std::move(label), lhs, rhs, margin, tol, std::isfinite(margin) && margin >= -tol});
    }

    // lhs >= rhs, allowing a deficit of tol.
    const Check &add_ge(std::string label, double lhs, double rhs, double tol)
    {
        const double margin = lhs - rhs;
        return push({std::move(label), lhs, rhs, margin, tol, std::isfinite(margin) && margin >= -tol});
    }

    // |lhs - rhs| <= tol; the margin is -|lhs - rhs|.
    const Check &add_eq(std::string label, double lhs, double rhs, double tol)
    {
        const double margin = 0.0 - std::abs(lhs - rhs); // +0 rather than -0 on equality
        return push({std::move(label), lhs, rhs, margin, tol, std::isfinite(margin) && margin >= -tol});
    }

    // A boolean structural fact; encoded as lhs = 1 (true) or 0 against rhs = 1.
    const Check &add_flag(std::string label, bool ok)
    {
        return add_eq(std::move(label), ok ? 1.0 : 0.0, 1.0, 0.0);
    }

    // Exact comparison (big-rational or integer data); lhs, rhs are the
    // rounded values for display.
    const Check &add_exact(std::string label, double lhs, double rhs, bool equal)
    {
        return push({std::move(label), lhs, rhs, equal ? 0.0 : -std::max(std::abs(lhs - rhs), std::numeric_limits<double>::min()), 0.0, equal});
    }

    void merge(const BoundReport &other, const std::string &prefix = {})
    {
        for (const auto &c : other.m_checks) {
            Check copy = c;
            copy.label = prefix + copy.label;
            m_checks.push_back(std::move(copy));
        }
    }

    const std::vector<Check> &checks() const
    {
        return m_checks;
    }

    bool all_pass() const
    {
        for (const auto &c : m_checks) {
            if (!c.pass) {
                return false;
            }
        }
        return true;
    }

    std::size_t failures() const
    {
        std::size_t n = 0;
        for (const auto &c : m_checks) {
            n += c.pass ? 0 : 1;
        }
        return n;
    }

    Curve &curve()
    {
        return m_curve;
    }

    const Curve &curve() const
    {
        return m_curve;
    }

private:
    const Check &push(Check c)
    {
        m_checks.push_back(std::move(c));
        return m_checks.back();
    }

    std::string m_suite;
    json m_params = json::object();
    std::optional<std::uint64_t> m_seed;
    std::vector<Check> m_checks;
    Curve m_curve;
};

inline constexpr const char *report_version = "1.0.0";

namespace detail
{

// Non-finite values have no JSON literal; they are written as strings.
inline json number(double x)
{
    if (std::isfinite(x)) {
        return x;
    }
    if (std::isnan(x)) {
        return "nan";
    }
    return x > 0 ? "inf" : "-inf";
}

} // namespace detail

inline json to_json(const BoundReport &r)
{
    json checks = json::array();
    for (const auto &c : r.checks()) {
        checks.push_back({{"label", c.label},
                          {"lhs", detail::number(c.lhs)},
                          {"rhs", detail::number(c.rhs)},
                          {"margin", detail::number(c.margin)},
                          {"pass", c.pass},
                          {"tol", detail::number(c.tol)}});
    }
    json out = {{"suite", r.suite()}, {"params", r.params()}, {"checks", std::move(checks)},
                {"version", report_version}};
    out["seed"] = r.seed() ? json(*r.seed()) : json(nullptr);
    return out;
}

inline void write_csv(std::ostream &os, const Curve &curve)
{
    for (std::size_t i = 0; i < curve.columns.size(); ++i) {
        os << (i ? "," : "") << curve.columns[i];
    }
    os << '\n';
    char buf[64];
    for (const auto &row : curve.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            os << (i ? "," : "") << buf;
        }
        os << '\n';
    }
}

} // namespace gafsym

#endif
