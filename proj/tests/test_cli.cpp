// Runs the built rmnest binary and checks exit codes and output files.
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct run_result {
    int status = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class cli : public ::testing::Test {
protected:
    fs::path dir;
    void SetUp() override {
        dir = fs::temp_directory_path() / ("rmnest_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    run_result run(const std::string& args) {
        auto out = dir / "stdout.txt", err = dir / "stderr.txt";
        std::string cmd = std::string(RMNEST_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
        int raw = std::system(cmd.c_str());
        return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
    }
    fs::path write(const std::string& name, const std::string& text) {
        auto p = dir / name;
        std::ofstream(p) << text;
        return p;
    }
};

}  // namespace

TEST_F(cli, RmInfo) {
    auto r = run("rm-info --code 'rm 1 3'");
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("code,n,dim,rate_exact"), std::string::npos);
    EXPECT_NE(r.out.find("rm 1 3,8,4,1/2"), std::string::npos);
}

TEST_F(cli, MalformedChannelExitsOne) {
    auto r = run("metrics --code 'rm 1 3' --channel 'bsc zz'");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("channel"), std::string::npos) << r.err;
    auto cfg = write("bad.cfg", "command = metrics\ncode = rm 1 3\nchannel = bsc 1.5\n");
    auto c = run("run " + cfg.string());
    EXPECT_EQ(c.status, 1);
    EXPECT_NE(c.err.find("line 3"), std::string::npos) << c.err;
}

TEST_F(cli, UsageErrorsExitOne) {
    EXPECT_EQ(run("").status, 1);
    EXPECT_EQ(run("metrics --no-such-flag 1").status, 1);
    EXPECT_EQ(run("run " + write("unknown.cfg", "command = metrics\ncolour = red\n").string()).status, 1);
}

TEST_F(cli, InfeasibleExitsTwo) {
    auto r = run("metrics --code 'rm 2 7' --channel 'bsc 0.1'");
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("infeasible"), std::string::npos);
}

TEST_F(cli, SampleConfigs) {
    auto rate = run(std::string("run ") + RMNEST_CONFIG_DIR + "/rm_rate_table.cfg");
    EXPECT_EQ(rate.status, 0) << rate.err;
    EXPECT_NE(rate.out.find("r,m,rate,phi,gap,gap_bound,holds"), std::string::npos);
    EXPECT_EQ(rate.out.find("false"), std::string::npos);
    auto two = run(std::string("run ") + RMNEST_CONFIG_DIR + "/bec_two_look_rm13.cfg");
    EXPECT_EQ(two.status, 0) << two.err;
    EXPECT_NE(two.out.find("p,pe_short,pe_long,rho,bound,pass"), std::string::npos);
    EXPECT_EQ(two.out.find("false"), std::string::npos);
}

TEST_F(cli, OutFileIsByteIdenticalAcrossRuns) {
    auto a = dir / "a.json", b = dir / "b.json";
    std::string base = "metrics --code 'rm 1 4' --channel 'bsc 0.05' --mode mc --samples 30000 --seed 9 --workers 2 --format json --out ";
    ASSERT_EQ(run(base + a.string()).status, 0);
    ASSERT_EQ(run(base + b.string()).status, 0);
    auto first = slurp(a);
    EXPECT_FALSE(first.empty());
    EXPECT_EQ(first, slurp(b));
    EXPECT_NE(first.find("\"rows\""), std::string::npos);
}

TEST_F(cli, VerifySubset) {
    auto r = run("verify --suite 1,11");
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.err.find("[PASS]  1"), std::string::npos);
    EXPECT_NE(r.out.find("id,name,pass"), std::string::npos);
    EXPECT_EQ(run("verify --suite 99").status, 1);
}
