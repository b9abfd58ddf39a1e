#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "qstat/cli/app.hpp"

using namespace qstat::cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args, const std::map<std::string, std::string>& env = {})
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err, [&](const char* name) -> const char* {
        const auto it = env.find(name);
        return it == env.end() ? nullptr : it->second.c_str();
    });
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        out.push_back(l);
    }
    return out;
}

std::string header_row(const std::string& csv)
{
    for (const auto& l : lines(csv)) {
        if (!l.empty() && l[0] != '#') {
            return l;
        }
    }
    return {};
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("qstat_test_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST(Cli, OccupationCsvColumns)
{
    const auto b = run({"occupation", "--q", "0.5", "--steps", "5"});
    ASSERT_EQ(b.code, exit_ok) << b.err;
    EXPECT_EQ(lines(b.out).front(), "# schema_version = 1");
    EXPECT_EQ(header_row(b.out), "eta,n_exact,n_jd,n_lower,n_upper");
    const auto f = run({"occupation", "--family", "f", "--q", "0.5", "--eta-min", "-2", "--steps", "5"});
    ASSERT_EQ(f.code, exit_ok) << f.err;
    EXPECT_EQ(header_row(f.out), "eta,g,n_exact,n_arcsin,n_trace");
}

TEST(Cli, JsonSchema)
{
    const auto r = run({"virial", "--family", "f", "--q", "0.4,0.9", "--order", "4", "--format", "json"});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    const auto j = nlohmann::ordered_json::parse(r.out);
    EXPECT_EQ(j.at("schema_version"), 1);
    EXPECT_EQ(j.at("config").at("command"), "virial");
    ASSERT_TRUE(j.at("data").is_array());
    EXPECT_EQ(j.at("data").size(), 8u);
    const auto& row = j.at("data").at(1);
    EXPECT_EQ(row.at("k"), 2);
    EXPECT_NEAR(row.at("b_k").get<double>(), 0.176776695296637, 1e-14);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run({"occupation", "--q", "1.5"}).code, exit_domain);
    EXPECT_EQ(run({"occupation", "--q", "0.5", "--eta-min", "0.1"}).code, exit_domain);
    EXPECT_EQ(run({"eos", "--q", "0.5", "--x-max", "0.6"}).code, exit_domain);
    EXPECT_EQ(run({"occupation", "--no-such-flag"}).code, exit_usage);
    EXPECT_EQ(run({}).code, exit_usage);
    EXPECT_EQ(run({"occupation", "--format", "xml"}).code, exit_usage);
    EXPECT_EQ(run({"bounds", "--q", "0.5,0.6"}).code, exit_usage);
    EXPECT_EQ(run({"fock", "--q", "0.5"}).code, exit_ok);
    EXPECT_EQ(run({"occupation", "--help"}).code, exit_ok);
}

TEST(Cli, DomainErrorNamesTheFormula)
{
    const auto r = run({"occupation", "--q", "0.5", "--eta-min", "0.1"});
    EXPECT_NE(r.err.find("domain error"), std::string::npos);
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, OutputIndependentOfThreadCount)
{
    for (const std::vector<std::string> base :
         {std::vector<std::string>{"occupation", "--q", "0.5", "--steps", "40"},
          std::vector<std::string>{"eos", "--family", "f", "--q", "0.3,0.7,1", "--steps", "20"},
          std::vector<std::string>{"verify"}}) {
        auto one = base;
        one.insert(one.end(), {"--jobs", "1"});
        auto four = base;
        four.insert(four.end(), {"--jobs", "4"});
        const auto a = run(one);
        const auto b = run(four);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out);
        EXPECT_EQ(a.out, run(base).out);
    }
}

TEST(Cli, ConfigFileThenEnvironmentThenFlags)
{
    const auto cfg = temp_file("run.ini");
    {
        std::ofstream f(cfg);
        f << "[general]\nprecision = 6\n[eos]\nq = 0.8\nsteps = 3\n[constants]\nmass = 2\nh = 3\n";
    }
    const auto from_file = run({"eos", "--config", cfg.string(), "--format", "json"});
    ASSERT_EQ(from_file.code, exit_ok) << from_file.err;
    auto j = nlohmann::ordered_json::parse(from_file.out);
    EXPECT_EQ(j["config"]["q"], "0.8");
    EXPECT_EQ(j["config"]["steps"], "3");
    EXPECT_EQ(j["config"]["mass"], "2");
    EXPECT_EQ(j["config"]["h"], "3");
    EXPECT_EQ(j["data"].size(), 3u);

    const auto with_env = run({"eos", "--config", cfg.string(), "--format", "json"}, {{"QSTAT_CONST_MASS", "5"}});
    j = nlohmann::ordered_json::parse(with_env.out);
    EXPECT_EQ(j["config"]["mass"], "5");
    EXPECT_EQ(j["config"]["h"], "3");

    const auto with_flag = run({"eos", "--config", cfg.string(), "--format", "json", "--mass", "7", "--steps", "2"},
                               {{"QSTAT_CONST_MASS", "5"}});
    j = nlohmann::ordered_json::parse(with_flag.out);
    EXPECT_EQ(j["config"]["mass"], "7");
    EXPECT_EQ(j["data"].size(), 2u);
    std::filesystem::remove(cfg);
}

TEST(Cli, BadConfigIsUsageError)
{
    const auto cfg = temp_file("bad.ini");
    {
        std::ofstream f(cfg);
        f << "[nonsense]\nx = 1\n";
    }
    EXPECT_EQ(run({"eos", "--config", cfg.string()}).code, exit_usage);
    EXPECT_EQ(run({"eos", "--config", "/nonexistent/qstat.ini"}).code, exit_usage);
    std::filesystem::remove(cfg);
}

TEST(Cli, OutputFileMatchesStdout)
{
    const auto path = temp_file("out.csv");
    const auto to_file = run({"bounds", "--q", "0.6", "--steps", "7", "-o", path.string()});
    ASSERT_EQ(to_file.code, exit_ok) << to_file.err;
    EXPECT_TRUE(to_file.out.empty());
    EXPECT_EQ(slurp(path), run({"bounds", "--q", "0.6", "--steps", "7"}).out);
    std::filesystem::remove(path);
}

TEST(Cli, PlotScriptsAreDeterministic)
{
    for (const std::vector<std::string> args :
         {std::vector<std::string>{"occupation", "--steps", "6"}, std::vector<std::string>{"bounds", "--steps", "6"},
          std::vector<std::string>{"eos", "--q", "0.5,0.9", "--steps", "4"},
          std::vector<std::string>{"virial", "--q", "0.5,1"}}) {
        const auto p1 = temp_file("a.gp");
        const auto p2 = temp_file("b.gp");
        auto a = args;
        a.insert(a.end(), {"--plot", p1.string()});
        auto b = args;
        b.insert(b.end(), {"--plot", p2.string(), "--jobs", "3"});
        ASSERT_EQ(run(a).code, exit_ok) << args.front();
        ASSERT_EQ(run(b).code, exit_ok);
        const std::string script = slurp(p1);
        EXPECT_EQ(script, slurp(p2));
        EXPECT_NE(script.find(" << EOD"), std::string::npos);
        EXPECT_NE(script.find("plot"), std::string::npos);
        std::filesystem::remove(p1);
        std::filesystem::remove(p2);
    }
    Dataset d;
    d.kind = "fock";
    EXPECT_THROW(emit_plot_script(d, "fock"), std::invalid_argument);
}

TEST(Cli, VerifyListsErrata)
{
    const auto r = run({"verify"});
    EXPECT_EQ(r.code, exit_ok) << r.err;
    EXPECT_NE(r.out.find("erratum.reversion_cubic_coefficient"), std::string::npos);
    EXPECT_NE(r.out.find("ERRATUM"), std::string::npos);
    EXPECT_EQ(r.out.find(",FAIL,"), std::string::npos);
}

TEST(Cli, LimitsAllPass)
{
    const auto r = run({"limits"});
    EXPECT_EQ(r.code, exit_ok) << r.err;
    EXPECT_EQ(header_row(r.out), "family,q,eta,value,reference,rel_error,threshold,status");
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, PrecisionValidated)
{
    EXPECT_EQ(run({"virial", "--precision", "0"}).code, exit_usage);
    EXPECT_EQ(run({"virial", "--precision", "18"}).code, exit_usage);
    const auto r = run({"virial", "--q", "1", "--precision", "4"});
    EXPECT_NE(r.out.find("-0.1768"), std::string::npos);
}
