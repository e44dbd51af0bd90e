#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gafsym/suites.hpp>

using namespace gafsym;

namespace
{

struct CliRun {
    int status;
    std::string out;
};

CliRun invoke(const std::string &args, const std::string &env = "")
{
    const std::string cmd = env + (env.empty() ? "" : " ") + GAFSYM_CLI_PATH + " " + args + " 2>/dev/null";
    FILE *p = popen(cmd.c_str(), "r");
    if (!p) {
        return {-1, {}};
    }
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) {
        out.append(buf, n);
    }
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

bool all_checks_pass(const json &j)
{
    for (const auto &c : j.at("checks")) {
        if (!c.at("pass").get<bool>()) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST(Cli, ChaseFormulaValue)
{
    const CliRun r = invoke("chase --d 29 --mode formula");
    ASSERT_EQ(r.status, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("suite"), "chase");
    EXPECT_EQ(j.at("params").at("d"), 29);
    bool seen = false;
    for (const auto &c : j.at("checks")) {
        if (c.at("label") == "sigma2_lower") {
            const double v = c.at("lhs").get<double>();
            EXPECT_GE(v, 1.7205);
            EXPECT_LE(v, 1.7211);
            seen = true;
        }
    }
    EXPECT_TRUE(seen);
}

TEST(Cli, GrunskyIdentityHasZeroMargins)
{
    const CliRun r = invoke("grunsky --map identity --check all");
    ASSERT_EQ(r.status, 0);
    const json j = json::parse(r.out);
    ASSERT_FALSE(j.at("checks").empty());
    for (const auto &c : j.at("checks")) {
        EXPECT_TRUE(c.at("pass").get<bool>()) << c.at("label");
        if (c.at("label").get<std::string>().find("norm") == std::string::npos) {
            EXPECT_EQ(c.at("margin").get<double>(), 0.0) << c.at("label");
        }
    }
}

TEST(Cli, SeriesBoundPermutation)
{
    const CliRun r = invoke("bounds --suite series --mode permutation --d 3 --n 256 --s 0.5,0.9,0.99");
    ASSERT_EQ(r.status, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("checks").size(), 3u);
    EXPECT_TRUE(all_checks_pass(j));
}

TEST(Cli, ReportSchema)
{
    const json j = json::parse(invoke("symbols --trials 2").out);
    for (const char *key : {"suite", "params", "seed", "checks", "version"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    for (const char *key : {"label", "lhs", "rhs", "margin", "pass", "tol"}) {
        EXPECT_TRUE(j.at("checks").at(0).contains(key)) << key;
    }
    // The resolved configuration includes defaults the user did not pass.
    EXPECT_TRUE(j.at("params").contains("working_order"));
}

TEST(Cli, EmptyReportIsValidJson)
{
    BoundReport empty("chase");
    std::ostringstream os;
    emit_report(empty, "json", "", os);
    const json j = json::parse(os.str());
    EXPECT_TRUE(j.at("checks").is_array());
    EXPECT_TRUE(j.at("checks").empty());
    EXPECT_EQ(exit_code(empty), 0);
}

TEST(Cli, ChaseSeriesCsvColumns)
{
    const auto path = std::filesystem::temp_directory_path() / "gafsym_cli_series.csv";
    const CliRun r = invoke("chase --mode series --r 0.9,0.99 --format csv --out " + path.string());
    EXPECT_NE(r.status, 2);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    EXPECT_EQ(header, "r,ratio,formula_value");
    int rows = 0;
    for (std::string line; std::getline(f, line);) {
        rows += line.empty() ? 0 : 1;
    }
    EXPECT_EQ(rows, 2);
    // The JSON report still reaches standard output.
    EXPECT_NO_THROW(json::parse(r.out));
    std::filesystem::remove(path);
}

TEST(Cli, ReproducibleWithSeed)
{
    const CliRun a = invoke("gaf --mode identical --trials 2000 --seed 7");
    const CliRun b = invoke("gaf --mode identical --trials 2000 --seed 7");
    const CliRun c = invoke("gaf --mode identical --trials 2000", "GAFSYM_SEED=7");
    const CliRun d = invoke("gaf --mode identical --trials 2000 --seed 7", "GAFSYM_SEED=8");
    const CliRun e = invoke("gaf --mode identical --trials 2000 --seed 8");
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    EXPECT_EQ(a.out, d.out);
    EXPECT_NE(a.out, e.out);
    EXPECT_EQ(json::parse(a.out).at("seed"), 7);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(invoke("chase --no-such-flag").status, 2);
    EXPECT_EQ(invoke("").status, 2);
    EXPECT_EQ(invoke("grunsky --map nowhere").status, 2);
    EXPECT_EQ(invoke("chase --d 2").status, 2);
    EXPECT_EQ(invoke("chase --out /nonexistent-dir/x.json").status, 2);
    EXPECT_EQ(invoke("mockbloch --threshold 1000").status, 1);
    EXPECT_EQ(invoke("--help").status, 0);
}

TEST(Cli, ResolveParamsRejectsUnknownKeysAndTypes)
{
    SuiteConfig cfg;
    cfg.suite = "chase";
    cfg.params = {{"bogus", 1}};
    EXPECT_THROW(detail::resolve_params(cfg), precondition_error);
    cfg.params = {{"d", "twenty-nine"}};
    EXPECT_THROW(detail::resolve_params(cfg), precondition_error);
    cfg.params = {{"d", 7}};
    EXPECT_EQ(detail::resolve_params(cfg).at("d"), 7);
    cfg.suite = "nosuchsuite";
    cfg.params = json::object();
    EXPECT_THROW(detail::resolve_params(cfg), precondition_error);
}
