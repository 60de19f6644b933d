#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <sys/wait.h>

using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string("\"") + OBTUSE_CLI_PATH + "\" " + args + " 2>/dev/null";
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    Run r;
    char buf[4096];
    while (std::size_t k = std::fread(buf, 1, sizeof buf, pipe.get())) r.out.append(buf, k);
    const int status = pclose(pipe.release());
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string spec(const char* name) { return std::string(OBTUSE_SPEC_DIR) + "/" + name; }

}  // namespace

TEST(Cli, BoundJson) {
    const auto r = cli("bound --dim 2 --n-max 100000 --seed 5");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j.at("lower_bound").get<double>(), 1.0 / 3, 1e-4);
    EXPECT_TRUE(j.at("monotone").get<bool>());
    EXPECT_EQ(j.at("manifest").at("seed").get<std::uint64_t>(), 5u);
    EXPECT_EQ(j.at("manifest").at("subcommand"), "bound");
}

TEST(Cli, BoundCsvCarriesManifestAndRows) {
    const auto r = cli("bound --dim 3 --n-max 1000 --format csv --stride 100");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("# manifest: ", 0), 0u);
    EXPECT_NE(r.out.find("\n3,1000,"), std::string::npos);
    EXPECT_NE(r.out.find("# summary: "), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(cli("bound --dim 1").code, 2);
    EXPECT_EQ(cli("bound").code, 2);
    EXPECT_EQ(cli("nonsense").code, 2);
    EXPECT_EQ(cli("mc --spec /does/not/exist.json").code, 2);
    EXPECT_EQ(cli("search --n 2 --dim 2").code, 2);
    EXPECT_EQ(cli("fixedpoint --scan --optimize").code, 2);
}

TEST(Cli, TableRows) {
    const auto r = cli("table --dims 4..5 --n-max 100000");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\n4,"), std::string::npos);
    EXPECT_NE(r.out.find("\n5,"), std::string::npos);
}

TEST(Cli, SphereRecordsEntropySeed) {
    const auto r = cli("sphere --dim 3 --mc-samples 20000");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j.at("quadrature").get<double>(), 0.5, 1e-8);
    const auto seed = j.at("manifest").at("seed").get<std::uint64_t>();
    EXPECT_EQ(j.at("mc").at("seed").get<std::uint64_t>(), seed);
}

TEST(Cli, McIsSeededAndWorkerIndependent) {
    const auto a = cli("mc --spec " + spec("sphere3.json") + " --samples 100000 --seed 9 --workers 1");
    const auto b = cli("mc --spec " + spec("sphere3.json") + " --samples 100000 --seed 9 --workers 3");
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(json::parse(a.out).at("estimate").at("counts"), json::parse(b.out).at("estimate").at("counts"));
}

TEST(Cli, SingleArcIsAlwaysObtuse) {
    const auto r = cli("mc --spec " + spec("arc.json") + " --samples 50000 --seed 1");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out).at("estimate").at("p_hat").get<double>(), 1.0);
}

TEST(Cli, ReportForArcTriple) {
    const auto r = cli("mc --spec " + spec("arc_triple.json") + " --samples 50000 --seed 1 --report");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("patterns").size(), 10u);
    EXPECT_EQ(j.at("patterns").at("AAA").at("obtuse"), j.at("patterns").at("AAA").at("n"));
}

TEST(Cli, FixedPoint) {
    const auto r = cli("fixedpoint --optimize");
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(json::parse(r.out).at("x").get<double>(), 0.6739028, 1e-7);
    const auto scan = cli("fixedpoint --scan --steps 10");
    ASSERT_EQ(scan.code, 0);
    EXPECT_NE(scan.out.find("p,x,obtuse\n0.10000000000000001,"), std::string::npos);
}

TEST(Cli, SearchThenEnumerateAndReplay) {
    const std::string out = testing::TempDir() + "search.json";
    const auto r = cli("search --n 6 --dim 2 --restarts 2 --iterations 2000 --seed 3 --out " + out);
    ASSERT_EQ(r.code, 0);
    std::ifstream in(out);
    const auto j = json::parse(in);
    EXPECT_GE(j.at("best_count").get<int>(), 4);
    EXPECT_EQ(j.at("manifest").at("outputs")[0], out);

    const auto e = cli("enumerate --config " + out);
    ASSERT_EQ(e.code, 0);
    const auto ej = json::parse(e.out);
    const int bad = ej.at("counts").at("obtuse").get<int>() + ej.at("counts").at("right").get<int>() +
                    ej.at("counts").at("degenerate").get<int>();
    EXPECT_EQ(bad, j.at("best_count").get<int>());

    const std::string out2 = testing::TempDir() + "search2.json";
    std::rename(out.c_str(), out2.c_str());
    const auto again = cli("replay --manifest " + out2);
    ASSERT_EQ(again.code, 0);
    std::ifstream in2(out);
    const auto j2 = json::parse(in2);
    EXPECT_EQ(j2.at("configuration"), j.at("configuration"));
    EXPECT_EQ(j2.at("counts"), j.at("counts"));
    std::remove(out.c_str());
    std::remove(out2.c_str());
}

TEST(Cli, WorkersFromEnvironment) {
    const auto r = cli("mc --spec " + spec("sphere3.json") + " --samples 1000 --seed 2");
    ASSERT_EQ(r.code, 0);
    setenv("OBTUSE_WORKERS", "abc", 1);
    EXPECT_EQ(cli("mc --spec " + spec("sphere3.json") + " --samples 1000 --seed 2").code, 2);
    unsetenv("OBTUSE_WORKERS");
}
