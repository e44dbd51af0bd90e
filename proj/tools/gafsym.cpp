// gafsym <suite> [options]: runs one verification suite and writes its report.
// Exit status: 0 when every check passes, 1 when a check fails, 2 on a usage
// or configuration error.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <gafsym/suites.hpp>

namespace
{

// Values for one subcommand; only flags the user actually passed reach the
// suite, everything else takes the suite default.
struct Flags {
    std::map<std::string, std::int64_t> ints;
    std::map<std::string, double> reals;
    std::map<std::string, std::string> strings;
    std::map<std::string, std::vector<double>> lists;
    std::vector<std::pair<std::string, CLI::Option *>> options;
};

class Suite
{
public:
    Suite(CLI::App &app, const std::string &name, const std::string &help) : m_cmd(app.add_subcommand(name, help))
    {
    }

    Suite &integer(const std::string &names, const std::string &key, const std::string &help)
    {
        m_flags.options.emplace_back(key, m_cmd->add_option(names, m_flags.ints[key], help));
        return *this;
    }

    Suite &real(const std::string &names, const std::string &key, const std::string &help)
    {
        m_flags.options.emplace_back(key, m_cmd->add_option(names, m_flags.reals[key], help));
        return *this;
    }

    Suite &text(const std::string &names, const std::string &key, const std::string &help,
                const std::vector<std::string> &choices)
    {
        auto *opt = m_cmd->add_option(names, m_flags.strings[key], help);
        if (!choices.empty()) {
            opt->check(CLI::IsMember(choices));
        }
        m_flags.options.emplace_back(key, opt);
        return *this;
    }

    Suite &list(const std::string &names, const std::string &key, const std::string &help)
    {
        m_flags.options.emplace_back(key, m_cmd->add_option(names, m_flags.lists[key], help)->delimiter(','));
        return *this;
    }

    CLI::App *command() const
    {
        return m_cmd;
    }

    gafsym::json params() const
    {
        gafsym::json p = gafsym::json::object();
        for (const auto &[key, opt] : m_flags.options) {
            if (opt->count() == 0) {
                continue;
            }
            if (m_flags.ints.count(key)) {
                p[key] = m_flags.ints.at(key);
            } else if (m_flags.reals.count(key)) {
                p[key] = m_flags.reals.at(key);
            } else if (m_flags.strings.count(key)) {
                p[key] = m_flags.strings.at(key);
            } else {
                p[key] = m_flags.lists.at(key);
            }
        }
        return p;
    }

private:
    CLI::App *m_cmd;
    Flags m_flags;
};

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Numerical verification suites for Gaussian analytic function couplings"};
    app.require_subcommand(1);

    gafsym::SuiteConfig cfg;
    std::string seed_text;
    if (const char *env = std::getenv("GAFSYM_SEED")) {
        seed_text = env;
    }
    std::vector<Suite> suites;
    suites.reserve(8);

    suites.emplace_back(app, "bounds", "Series, circle-mean, derivative and fundamental-integral bounds");
    suites.back()
        .text("--suite", "suite", "series|circle|phipsi|fundamental|all", {"series", "circle", "phipsi", "fundamental", "all"})
        .text("--mode", "mode", "coupling family",
              {"permutation", "contraction", "partial_isometry", "unitary", "sesquianalytic", "conjugate_reflect",
               "identical", "independent", "corpus"})
        .integer("--d", "d", "interval-reversal base for --mode permutation (0: random permutation)")
        .integer("--trunc,--n", "trunc", "truncation N")
        .integer("--trials", "trials", "number of random couplings")
        .list("--s-grid,--s", "s_grid", "comma-separated s values in [0,1)")
        .list("--r-grid,--r", "r_grid", "comma-separated r values in [0,1)");

    suites.emplace_back(app, "chase", "The interval-reversal permutation and its asymptotic variance");
    suites.back()
        .integer("--d", "d", "base d >= 3")
        .text("--mode", "mode", "formula|argmax|series|intervals|all", {"formula", "argmax", "series", "intervals", "all"})
        .integer("--m-max", "m_max", "number of intervals")
        .integer("--d-min", "d_min", "argmax range start")
        .integer("--d-max", "d_max", "argmax range end")
        .list("--r-grid,--r", "r_grid", "comma-separated r values in [0,1)");

    suites.emplace_back(app, "grunsky", "Grunsky symbols, the wave equation and map reconstruction");
    suites.back()
        .text("--map", "map", "identity|koebe|cayley|poly|catalog", {"identity", "koebe", "cayley", "poly", "catalog"})
        .text("--check", "check", "symbol|nlw|matrix|reconstruct|all", {"symbol", "nlw", "matrix", "reconstruct", "all"})
        .integer("--trunc,--n", "trunc", "truncation N")
        .list("--c", "c", "parameter of z/(1-cz), as re or re,im")
        .list("--coeffs", "coeffs", "higher coefficients a_2,a_3,... of a polynomial map (real)");

    suites.emplace_back(app, "symbols", "Symbol transfer and the Moebius identity on random pairs");
    suites.back()
        .integer("--trunc,--n", "trunc", "matrix dimension")
        .integer("--trials", "trials", "number of random (T, phi) pairs")
        .integer("--working-order", "working_order", "Moebius working order")
        .real("--a-max", "a_max", "largest |a| of the random Moebius maps");

    suites.emplace_back(app, "gaf", "Coupling sampler covariances, 8x8 positivity and the triangle bound");
    suites.back()
        .text("--mode", "mode", "coupling family",
              {"independent", "identical", "conjugate_reflect", "permutation", "analytic", "sesquianalytic", "all"})
        .integer("--trunc,--n", "trunc", "truncation N")
        .integer("--trials", "trials", "Monte Carlo draws");

    suites.emplace_back(app, "cue", "Log-characteristic polynomials of Haar unitaries");
    suites.back()
        .integer("--trunc,--n", "trunc", "matrix size")
        .integer("--trials", "trials", "number of Haar samples")
        .list("--r-grid,--r", "r_grid", "grid radii (<= 0.8)");

    suites.emplace_back(app, "expansion", "Diagonal norm expansion and the combinatorial identity");
    suites.back()
        .integer("--trials", "trials", "number of random polynomials")
        .integer("--degree", "degree", "largest total degree (<= 12)")
        .integer("--n-max", "n_max", "range of the exact identity");

    suites.emplace_back(app, "mockbloch", "Greedy construction of f, g with fg outside the Bloch space");
    suites.back()
        .integer("--levels", "levels", "number of levels")
        .real("--growth", "growth", "factor applied to each minimal admissible log 1/(1-r^2)")
        .real("--r1", "r1", "first radius")
        .integer("--order", "order", "series order for the rank-one check")
        .real("--threshold", "threshold", "required final-level Bloch lower bound");

    for (auto &s : suites) {
        CLI::App *cmd = s.command();
        cmd->add_option("--seed", seed_text, "64-bit seed (default: $GAFSYM_SEED or 0)");
        cmd->add_option("--out", cfg.out, "output path (default: standard output)");
        cmd->add_option("--format", cfg.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!seed_text.empty()) {
            std::size_t used = 0;
            cfg.seed = std::stoull(seed_text, &used, 0);
            if (used != seed_text.size()) {
                throw std::invalid_argument("seed");
            }
        }
    } catch (const std::exception &) {
        std::cerr << "error: seed must be an unsigned 64-bit integer\n";
        return 2;
    }

    for (const auto &s : suites) {
        if (s.command()->parsed()) {
            cfg.suite = s.command()->get_name();
            cfg.params = s.params();
        }
    }

    try {
        const gafsym::BoundReport report = gafsym::run_suite(cfg);
        gafsym::emit_report(report, cfg.format, cfg.out, std::cout);
        if (!report.all_pass()) {
            std::cerr << cfg.suite << ": " << report.failures() << " of " << report.checks().size()
                      << " checks failed\n";
        }
        return gafsym::exit_code(report);
    } catch (const gafsym::precondition_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const gafsym::consistency_error &e) {
        std::cerr << "internal consistency failure: " << e.what() << '\n';
        return 1;
    }
}
