#include <gtest/gtest.h>

#include <json.hpp>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace loglap::cli;
using nlohmann::json;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

double value_of(const json& doc, const std::string& name) {
    for (const auto& r : doc["results"])
        if (r["name"] == name) return r["value"].get<double>();
    ADD_FAILURE() << "missing result " << name;
    return 0.0;
}

std::string string_of(const json& doc, const std::string& name) {
    for (const auto& r : doc["results"])
        if (r["name"] == name) return r["value"].get<std::string>();
    ADD_FAILURE() << "missing result " << name;
    return "";
}

}  // namespace

TEST(ParseArgs, Examples) {
    const RunConfig a = parse_args({"constants", "--dim", "2", "--format", "json"});
    EXPECT_EQ(a.command, Command::constants);
    EXPECT_EQ(a.dim, 2);
    EXPECT_EQ(a.format, Format::json);
    const RunConfig b = parse_args({"eig", "--domain", "interval:0,1", "--cells", "256", "--count", "4"});
    EXPECT_EQ(b.command, Command::eig);
    EXPECT_EQ(b.cells, 256);
    EXPECT_EQ(b.count, 4);
    EXPECT_EQ(b.domains.front(), "interval:0,1");
    const RunConfig c = parse_args({"slimit", "--domain", "interval:0,1", "--s", "0.1,0.05"});
    EXPECT_EQ(c.s_list, (std::vector<double>{0.1, 0.05}));
}

TEST(ParseArgs, UsageErrors) {
    EXPECT_THROW(parse_args({"frobnicate"}), UsageError);
    EXPECT_THROW(parse_args({"eig"}), UsageError);
    EXPECT_THROW(parse_args({"eig", "--domain", "interval:0,1", "--cells", "-3"}), UsageError);
    EXPECT_THROW(parse_args({"poisson", "--domain", "interval:0,1", "--tau", "0.6"}), UsageError);
    try {
        parse_args({"eig", "--domain", "interval:0,1", "--count", "many"});
        FAIL();
    } catch (const UsageError& e) {
        EXPECT_NE(std::string(e.what()).find("--count"), std::string::npos);
    }
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"eig", "--domain", "interval:0,1", "--cells", "16", "--count", "20"}).code, 1);
    EXPECT_EQ(run({"eig", "--domain", "interval:0,1", "--cells", "16", "--count", "2"}).code, 0);
    EXPECT_EQ(run({"poisson", "--domain", "interval:0,4", "--cells", "8"}).code, 1);
    EXPECT_EQ(run({"assemble", "--domain", "blob:1"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ErrorObject) {
    const CliRun r = run({"eig", "--domain", "interval:0,1", "--cells", "16", "--count", "20"});
    const json doc = json::parse(r.out);
    EXPECT_EQ(doc["error"]["kind"], "validation_error");
    EXPECT_EQ(doc["command"], "eig");
}

TEST(Cli, ConstantsReport) {
    const CliRun r = run({"constants", "--dim", "2"});
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_EQ(doc["command"], "constants");
    EXPECT_NEAR(value_of(doc, "c_N"), 0.3183098862, 1e-10);
    EXPECT_NEAR(value_of(doc, "rho_N"), 0.2318630314, 1e-10);
    EXPECT_NEAR(value_of(doc, "r_N"), 1.1229189671, 1e-10);
    for (const auto& row : doc["results"]) {
        EXPECT_TRUE(row.contains("tolerance"));
        EXPECT_FALSE(row["theorem_tag"].get<std::string>().empty());
    }
    EXPECT_TRUE(doc["provenance"].contains("abs_tol"));
}

TEST(Cli, MaxPrincipleOnLongInterval) {
    const CliRun r = run({"maxprin", "--domain", "interval:0,4", "--cells", "32"});
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_EQ(string_of(doc, "verdict"), "fails");
    EXPECT_EQ(string_of(doc, "certificate"), "classical-eigenvalue-bound");
}

TEST(Cli, DeterministicReports) {
    const std::vector<std::string> args{"faberkrahn", "--domain", "interval:0,1", "--domain",
                                        "union:interval:0,0.5;interval:2,2.5", "--cells", "32", "--threads", "2"};
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, CsvMirrorsResults) {
    const CliRun r = run({"constants", "--dim", "1", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("name,value,tolerance,theorem_tag\n", 0), 0u);
    EXPECT_NE(r.out.find("\nc_N,1"), std::string::npos);
}

TEST(Cli, ConfigFileWithOverride) {
    const std::string path = ::testing::TempDir() + "loglap.cfg";
    {
        std::ofstream f(path);
        f << "# study\ndomain = interval:0,1\ncells = 16\ncount = 3\n";
    }
    const RunConfig c = parse_args({"eig", "--config", path, "--count", "2"});
    EXPECT_EQ(c.cells, 16);
    EXPECT_EQ(c.count, 2);
    EXPECT_EQ(c.domains.front(), "interval:0,1");
    std::remove(path.c_str());
}

TEST(Cli, OtherCommandsRun) {
    EXPECT_EQ(run({"eval", "--field", "bump", "--dim", "1", "--x", "0.2", "--s", "0.01"}).code, 0);
    EXPECT_EQ(run({"assemble", "--domain", "interval:0,1", "--cells", "8", "--kind", "frac", "--s", "0.25"}).code, 0);
    EXPECT_EQ(run({"slimit", "--domain", "interval:0,1", "--cells", "16"}).code, 0);
    EXPECT_EQ(run({"hardy", "--domain", "interval:0,1", "--cells", "16"}).code, 0);
    EXPECT_EQ(run({"poisson", "--domain", "interval:0,1", "--cells", "64", "--shells", "0.125,0.0625,0.03125"}).code, 0);
    const CliRun b = run({"barrier"});
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(json::parse(b.out)["params"]["tau"], 0.3);
}
