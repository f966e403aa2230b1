#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "omnidris");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = omnidris::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST(Cli, OptimizeJson)
{
    const auto r = invoke({"optimize", "--scenario", "C1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = omnidris::json::parse(r.out);
    EXPECT_NEAR(j["curves"][0]["n_star_cubic"].get<double>(), 10.0502, 1e-3 * 10.0502);
    EXPECT_EQ(j["scenario"], "C1");
}

TEST(Cli, SweepToFile)
{
    const auto path = std::filesystem::temp_directory_path() / "omnidris_c0.csv";
    const auto r = invoke({"sweep", "--scenario", "C0", "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto rows = parse_csv(buf.str());
    ASSERT_FALSE(rows.empty());
    const auto best = std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a[3] < b[3]; });
    EXPECT_NEAR((*best)[0], 2.2, 0.05);
    std::filesystem::remove(path);
}

TEST(Cli, SweepIsByteIdenticalAcrossRuns)
{
    const auto a = invoke({"sweep", "--scenario", "fig2-top", "--curve", "zeta=3N/4"});
    const auto b = invoke({"sweep", "--scenario", "fig2-top", "--curve", "zeta=3N/4"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto ja = invoke({"optimize", "--scenario", "table1", "--format", "json"});
    const auto jb = invoke({"optimize", "--scenario", "table1", "--format", "json"});
    EXPECT_EQ(ja.out, jb.out);
}

TEST(Cli, RateAllAbsorbingIsDegenerate)
{
    const auto r = invoke({"rate", "--scenario", "C0", "--n", "4", "--theta", "4", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = omnidris::json::parse(r.out);
    EXPECT_EQ(j["rate_bps"].get<double>(), 0.0);
    EXPECT_TRUE(j["degenerate"].get<bool>());
}

TEST(Cli, RateCsv)
{
    const auto r = invoke({"rate", "--scenario", "C0", "--n", "2.2", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0][3], 0.3252, 1e-3 * 0.3252);
}

TEST(Cli, TablesAndPresets)
{
    const auto t = invoke({"tables", "--format", "json"});
    ASSERT_EQ(t.code, 0) << t.err;
    const auto j = omnidris::json::parse(t.out);
    EXPECT_TRUE(j["table1"]["pass"].get<bool>());
    EXPECT_TRUE(j["table2"]["pass"].get<bool>());

    const auto p = invoke({"presets"});
    ASSERT_EQ(p.code, 0);
    EXPECT_NE(p.out.find("fig2-bottom-text"), std::string::npos);
}

TEST(Cli, ScenarioFile)
{
    const auto r = invoke({"optimize", "--scenario", std::string(OMNIDRIS_TEST_DATA) + "/../../scenarios/normalized_c0.json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("c0-file"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"optimize", "--scenario", "C0", "--bogus"}).code, 2);
    EXPECT_EQ(invoke({"sweep", "--scenario", "C0", "--format", "xml"}).code, 2);
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_NE(invoke({"frobnicate"}).err.find("Usage"), std::string::npos);
}

TEST(Cli, RejectionsExitOne)
{
    EXPECT_EQ(invoke({"optimize", "--scenario", "no-such-preset-or-file"}).code, 1);
    EXPECT_EQ(invoke({"optimize", "--scenario", std::string(OMNIDRIS_TEST_DATA) + "/bad_psi.json"}).code, 1);
    EXPECT_EQ(invoke({"optimize", "--scenario", "C0", "--curve", "nope"}).code, 1);
}

TEST(Cli, HelpOnEverySubcommand)
{
    for (const char* sub : {"rate", "optimize", "sweep", "tables", "presets"}) {
        const auto r = invoke({sub, "--help"});
        EXPECT_EQ(r.code, 0) << sub;
        EXPECT_NE(r.out.find("--format"), std::string::npos) << sub;
    }
}
