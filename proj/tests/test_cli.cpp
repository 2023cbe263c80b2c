#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(QITEST_BINARY) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_csv(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / ("qitest_cli_" + name + ".csv");
    std::ofstream(path) << body;
    return path.string();
}

std::string channing_args(const std::string& group) {
    return std::string(QI_DATA_DIR) +
           "/channing.csv --entry-col entry_age_months --exit-col exit_age_months "
           "--event-col event --group-col sex --group " + group + " --skip-invalid";
}

double first_test_field(const RunResult& r, const char* field) {
    const auto j = nlohmann::json::parse(r.out);
    return j["result"]["tests"][0][field].get<double>();
}

}  // namespace

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run("--help").exit_code, 0); }

TEST(Cli, UnknownOptionIsUsageError) { EXPECT_EQ(run("test --bogus x").exit_code, 2); }

TEST(Cli, TestOnSmallFile) {
    std::string body = "entry,exit,event\n";
    for (int i = 0; i < 30; ++i) {
        const double l = (i * 7 % 11) * 0.3;
        body += std::to_string(l) + "," + std::to_string(l + 1 + (i * 5 % 13) * 0.2) + "," +
                (i % 4 == 0 ? "0" : "1") + "\n";
    }
    const auto path = temp_csv("ok", body);
    const auto r = run("--format json test " + path + " --event-col event");
    ASSERT_EQ(r.exit_code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["tool"], "qitest");
    EXPECT_EQ(j["command"], "test");
    EXPECT_EQ(j["result"]["tests"][0]["censored_mode"], true);
}

TEST(Cli, MissingFileIsParseError) {
    EXPECT_EQ(run("test /nonexistent/qitest.csv").exit_code, 3);
}

TEST(Cli, MalformedNumberIsParseError) {
    const auto path = temp_csv("bad", "entry,exit\n0,abc\n");
    EXPECT_EQ(run("test " + path).exit_code, 3);
}

TEST(Cli, EntryAfterExitIsValidationError) {
    const auto path = temp_csv("invalid", "entry,exit\n0,1\n3,2\n1,4\n");
    EXPECT_EQ(run("test " + path).exit_code, 4);
}

TEST(Cli, NoComparablePairsIsDegenerate) {
    const auto path = temp_csv("disjoint", "entry,exit\n0,1\n2,3\n");
    EXPECT_EQ(run("test " + path).exit_code, 5);
}

TEST(Cli, ChanningWomenRankRank) {
    const auto r = run("--format json test " + channing_args("Female") + " --g rank --h rank");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NEAR(first_test_field(r, "chi_square"), 8.287, 0.01);
    EXPECT_NEAR(first_test_field(r, "p_value"), 0.0040, 0.0005);
}

TEST(Cli, ChanningMenReversedLinear) {
    const auto r =
        run("--format json test " + channing_args("Male") + " --reverse --g linear --h sign");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NEAR(first_test_field(r, "chi_square"), 7.490, 0.01);
}

TEST(Cli, ChanningCommandJson) {
    const auto r = run("--format json channing --group both");
    ASSERT_EQ(r.exit_code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["command"], "channing");
    EXPECT_FALSE(j["warnings"].empty());
}

TEST(Cli, CsvFormat) {
    const auto r = run("--format csv channing --group men");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find(','), std::string::npos);
}
