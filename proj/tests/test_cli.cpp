#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli_runner.hpp"
#include "stieltjes/io.hpp"

using stieltjes::parse_json_text;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Cli, ClassifyExpressionViolates) {
    const auto r = cli::run("classify --expr \"exp(-x)\" --lambda 1");
    EXPECT_EQ(r.code, 1);
    const auto j = parse_json_text(r.out);
    EXPECT_EQ(j["verdict"], "violated");
    bool found = false;
    for (const auto& v : j["violations"])
        if (v["x"] == 1.0 && v["n"] == 0 && v["k"] == 2) {
            found = true;
            EXPECT_NEAR(std::stod(v["value"].is_string() ? v["value"].get<std::string>() : v["value"].dump()),
                        -std::exp(-1.0), 1e-12);
        }
    EXPECT_TRUE(found);
}

TEST(Cli, ClassifyMeasureConsistent) {
    const auto r = cli::run("classify --measure " + cli::sample("atom.json") + " --lambda 1");
    EXPECT_EQ(r.code, 0);
    const auto j = parse_json_text(r.out);
    EXPECT_EQ(j["verdict"], "consistent");
    EXPECT_EQ(j["evidence"], "grid-limited evidence");
    EXPECT_EQ(j["parameters"]["precision"], "extended");
}

TEST(Cli, ClassifySyntaxError) {
    const std::string cmd = "\"" STIELTJES_CLI "\" classify --expr \"1/(x\" 2>&1 >/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    char buf[512] = {};
    const std::size_t got = fread(buf, 1, sizeof buf - 1, p);
    const int status = pclose(p);
    EXPECT_EQ(WEXITSTATUS(status), 2);
    const std::string err(buf, got);
    EXPECT_NE(err.find("position 4"), std::string::npos) << err;
}

TEST(Cli, OtherChecks) {
    EXPECT_EQ(cli::run("classify --expr \"exp(-x)\" --check cm --nmax 8").code, 0);
    EXPECT_EQ(cli::run("classify --expr \"exp(-x)\" --check c --grid 2:2:1 --kmax 3").code, 1);
    EXPECT_EQ(cli::run("classify --expr \"exp(-x)\" --check pick").code, 1);
    EXPECT_EQ(cli::run("classify --measure " + cli::sample("atom.json") + " --check pick").code, 0);
    EXPECT_EQ(cli::run("classify --expr \"1/(x+1)\" --lambda 0.5 --grid 2:2:1 --nmax 2 --kmax 2").code, 1);
}

TEST(Cli, InputErrors) {
    EXPECT_EQ(cli::run("classify --expr \"sin(x)\"").code, 2);
    EXPECT_EQ(cli::run("classify --measure /nonexistent.json").code, 2);
    EXPECT_EQ(cli::run("classify --expr x --lambda -1").code, 2);
    EXPECT_EQ(cli::run("classify --expr x --grid 5:1:3").code, 2);
    EXPECT_EQ(cli::run("classify --expr x --precision quad").code, 2);
    EXPECT_EQ(cli::run("classify").code, 2);
    EXPECT_EQ(cli::run("bogus").code, 2);
    EXPECT_EQ(cli::run("table --expr \"log(x-5)\" --x 1").code, 2);
}

TEST(Cli, RecoverExamples) {
    const auto k32 = cli::run("recover --expr \"1/(x+1)\" --lambda 1 --x 1 --K 32");
    const auto k16 = cli::run("recover --expr \"1/(x+1)\" --lambda 1 --x 1 --K 16");
    ASSERT_EQ(k32.code, 0);
    ASSERT_EQ(k16.code, 0);
    const auto a = parse_json_text(k32.out), b = parse_json_text(k16.out);
    EXPECT_LT(std::stod(a["diagnostics"]["sup_error"].dump()), std::stod(b["diagnostics"]["sup_error"].dump()));
    EXPECT_EQ(a["precision"], "extended");
    EXPECT_EQ(b["precision"], "f64");

    EXPECT_EQ(cli::run("recover --expr \"exp(-x)\" --lambda 1 --x 1 --K 16").code, 1);

    const auto c = cli::run("recover --measure " + cli::sample("const2.json") + " --lambda 3 --x 5 --K 8");
    ASSERT_EQ(c.code, 0);
    const auto j = parse_json_text(c.out);
    EXPECT_EQ(j["C"], 2.0);
    EXPECT_TRUE(j["atoms"].empty());
}

TEST(Cli, RecoverConsistency) {
    const auto r = cli::run("recover --expr \"1/(x+1)\" --lambda 1 --x 1 --x2 2 --K 32");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sup_discrepancy"), std::string::npos);
}

TEST(Cli, Determinism) {
    for (const std::string args : {"classify --expr \"exp(-x)\" --lambda 1 --nmax 4 --kmax 4",
                                   "recover --expr \"log(1+1/x)\" --lambda 1 --x 1 --K 24",
                                   "table --expr \"exp(-x)\" --x 0.5", "moments --expr \"1/(x+1)\" --K 10",
                                   "limits --expr \"1/(x+1)\" --n 1 --k 2", "verify-kernel"}) {
        const auto a = cli::run(args), b = cli::run(args);
        EXPECT_EQ(a.code, b.code) << args;
        EXPECT_EQ(a.out, b.out) << args;
        EXPECT_FALSE(a.out.empty()) << args;
    }
}

TEST(Cli, PrecisionSelection) {
    const auto d = parse_json_text(cli::run("table --expr \"exp(-x)\" --x 1 --nmax 4 --kmax 4").out);
    EXPECT_EQ(d["precision"], "f64");
    const auto auto_ext = parse_json_text(cli::run("table --expr \"exp(-x)\" --x 1").out);
    EXPECT_EQ(auto_ext["precision"], "extended");
    EXPECT_EQ(auto_ext["n_max"], 8);
    const auto forced = parse_json_text(cli::run("table --expr \"exp(-x)\" --x 1 --precision f64").out);
    EXPECT_EQ(forced["precision"], "f64");
    const auto ext = parse_json_text(cli::run("table --expr \"exp(-x)\" --x 1 --precision extended").out);
    EXPECT_EQ(ext["n_max"], 16);
    const auto env = parse_json_text(cli::run("table --expr \"exp(-x)\" --x 1 --nmax 2 --kmax 2", "STIELTJES_PRECISION=extended").out);
    EXPECT_EQ(env["precision"], "extended");
    const auto flag_wins =
        parse_json_text(cli::run("table --expr \"exp(-x)\" --x 1 --nmax 2 --kmax 2 --precision f64", "STIELTJES_PRECISION=extended").out);
    EXPECT_EQ(flag_wins["precision"], "f64");
}

TEST(Cli, TableCsvWithScales) {
    const std::string out = testing::TempDir() + "stieltjes_table.csv";
    const auto r = cli::run("table --expr \"1/(x+1)\" --x 1 --nmax 1 --kmax 1 --format csv --out \"" + out + "\"");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(slurp(out), "k=0,k=1\n0.5,0.25\n0.25,0.25\n");
    const auto scales = slurp(testing::TempDir() + "stieltjes_table.scales.csv");
    EXPECT_EQ(scales.substr(0, 8), "k=0,k=1\n");
    std::remove(out.c_str());
}

TEST(Cli, MomentsAndLimits) {
    const auto m = cli::run("moments --expr \"1/(x+1)\" --x 1 --K 5");
    EXPECT_EQ(m.code, 0);
    const auto j = parse_json_text(m.out);
    EXPECT_EQ(j["moments"].size(), 6u);
    EXPECT_EQ(j["moments"][3], 0.0625);
    EXPECT_TRUE(j["completely_monotone"].get<bool>());
    EXPECT_EQ(cli::run("moments --expr \"exp(-x)\" --x 1 --K 10").code, 1);

    const auto l = parse_json_text(cli::run("limits --expr \"1/(x+1)\" --x 1 --n 0 --k 1 --precision f64").out);
    EXPECT_EQ(l["rows"].size(), 4u);
    EXPECT_EQ(cli::run("verify-kernel").code, 0);
}

TEST(Cli, MeasureOrderIsDefaultLambda) {
    // mixed.json is an order-1.5 measure: consistent at its own order, violated at lambda = 1.
    const std::string base = "classify --measure " + cli::sample("mixed.json") + " --grid 0.1:10:5 --nmax 4 --kmax 4";
    const auto own = cli::run(base);
    EXPECT_EQ(own.code, 0);
    EXPECT_EQ(parse_json_text(own.out)["parameters"]["lambda"], 1.5);
    EXPECT_EQ(cli::run(base + " --lambda 1").code, 1);
    EXPECT_EQ(cli::run(base + " --lambda 3").code, 0);
}
