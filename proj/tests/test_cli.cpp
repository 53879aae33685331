#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "sar2d/sar2d.hpp"

using nlohmann::json;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run(const std::string& args, const std::string& env = "") {
    const std::string err_path = ::testing::TempDir() + "sar2d_cli_stderr.txt";
    const std::string cmd = env + " " SAR2D_CLI_PATH " " + args + " 2>" + err_path;
    CliResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf{};
    for (std::size_t got; (got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), got);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream is(err_path);
    std::stringstream ss;
    ss << is.rdbuf();
    r.err = ss.str();
    return r;
}

json run_json(const std::string& args) {
    const CliResult r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return json::parse(r.out);
}

}  // namespace

TEST(Cli, Classify) {
    auto j = run_json("classify --alpha 0.3 --beta 0.3 --gamma 0.4");
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["kind"], "face_a");
    EXPECT_EQ(j["rho"], 0.25);
    j = run_json("classify --alpha 1 --beta 1 --gamma -1");
    EXPECT_EQ(j["kind"], "vertex_c");
    EXPECT_EQ(j["rho"], 1.0);
    j = run_json("classify --alpha 2 --beta 0 --gamma 0");
    EXPECT_EQ(j["kind"], "outside");
    EXPECT_TRUE(j["rho"].is_null());
    j = run_json("classify --alpha -0.8 --beta 0.1 --gamma 0.3");
    EXPECT_EQ(j["canonical"]["alpha"], 0.8);
    EXPECT_EQ(j["canonical"]["gamma"], -0.3);
    EXPECT_EQ(j["sign_map"]["flip_k"], true);
}

TEST(Cli, NonFiniteInputIsRejected) {
    const CliResult r = run("classify --alpha nan --beta 0 --gamma 0");
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
    ASSERT_FALSE(r.err.empty());
    EXPECT_EQ(r.err.find('\n'), r.err.size() - 1);
    EXPECT_EQ(json::parse(r.err)["error"], "invalid_parameter");
}

TEST(Cli, GcoefMatchesLibrary) {
    EXPECT_EQ(run_json("gcoef --alpha 0.5 --beta 0.3 --gamma 0.2 --m 1 --n 1 --method direct")["value"], 0.5);
    const sar2d::Params p{0.25, 0.35, 0.1};
    for (const char* method : {"direct", "binomial", "hypergeometric"}) {
        const auto j = run_json(std::string("gcoef --alpha 0.25 --beta 0.35 --gamma 0.1 --m 7 --n 4 --method ") + method);
        const double want = std::string(method) == "direct"    ? sar2d::g_direct(7, 4, p)
                            : std::string(method) == "binomial" ? sar2d::g_binomial(7, 4, p)
                                                                : sar2d::g_hypergeom(7, 4, p);
        EXPECT_EQ(j["value"].get<double>(), want) << method;
    }
    EXPECT_EQ(run_json("gcoef --alpha 0.25 --beta 0.35 --gamma 0.1 --m 7 --n 4")["value"].get<double>(),
              sar2d::g_table(7, 4, p)(7, 4));
    EXPECT_EQ(run("gcoef --alpha 0 --beta 0.35 --gamma 0.1 --m 7 --n 4 --method hypergeometric").code, 2);
}

TEST(Cli, CovAndVar) {
    EXPECT_EQ(run_json("cov --alpha 1 --beta -1 --gamma 1 --k1 2 --l1 3 --k2 4 --l2 1")["value"], 2.0);
    EXPECT_EQ(run_json("var --alpha 0.2 --beta 0.1 --gamma 0.3 --k 50 --l 50")["value"].get<double>(),
              sar2d::var_point(50, 50, {0.2, 0.1, 0.3}));
    const CliResult table = run("var --alpha 1 --beta 1 --gamma -1 --k 2 --l 2 --table");
    EXPECT_EQ(table.out, "k,l,var\n1,1,1\n1,2,2\n2,1,2\n2,2,4\n");
}

TEST(Cli, Limit) {
    auto j = run_json("limit --alpha 0.2 --beta 0.1 --gamma 0.3 --s 1 --t 1");
    EXPECT_EQ(j["value"].get<double>(), sar2d::sigma2_stable({0.2, 0.1, 0.3}));
    EXPECT_NEAR(j["value"].get<double>(), 1.219875, 1e-6);
    j = run_json("limit --alpha 0.5 --beta 0.5 --gamma -1");
    EXPECT_TRUE(j["value"].is_null());
    EXPECT_EQ(j["known"], false);
}

TEST(Cli, ConvergeCsvRoundTrip) {
    const CliResult r = run("converge --alpha 1 --beta 0.5 --gamma -0.5 --s 1 --t 1 --n-list 50,500");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.find('\r'), std::string::npos);
    std::istringstream is(r.out);
    const auto rows = sar2d::read_convergence_csv(is);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& row : rows) EXPECT_LT(row.abs_err, 1e-13);
    const auto rep = sar2d::convergence_study({1.0, 0.5, -0.5}, 1.0, 1.0, {50, 500});
    EXPECT_EQ(rows, rep.rows);

    const std::string path = ::testing::TempDir() + "sar2d_converge.csv";
    ASSERT_EQ(run("converge --alpha 0.3 --beta 0.3 --gamma 0.4 --n-list 8,16 --out " + path).code, 0);
    std::ifstream file(path);
    std::string header;
    std::getline(file, header);
    EXPECT_EQ(header, "n,var_exact,scaled,limit,abs_err,rel_err");
}

TEST(Cli, ConvergeErrors) {
    CliResult r = run("converge --alpha 0.5 --beta 0.5 --gamma -1 --n-list 10");
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.err)["error"], "domain_error");
    r = run("converge --alpha 0.3 --beta 0.3 --gamma 0.4 --n-list 100", "SAR2D_MEM_BUDGET_BYTES=64");
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(json::parse(r.err)["error"], "resource_error");
}

TEST(Cli, CheckBounds) {
    auto j = run_json("check-bounds --alpha 0.2 --beta 0.1 --gamma 0.2 --samples 100 --index-max 20 --seed 1");
    EXPECT_EQ(j["passed"], true);
    EXPECT_EQ(j["violations"], 0);
    EXPECT_EQ(run("check-bounds --alpha 0.5 --beta 0.5 --gamma -1").code, 2);
}

TEST(Cli, Simulate) {
    const std::string args = "simulate --alpha 0.2 --beta 0.1 --gamma 0.3 --k 6 --l 6 --reps 500 --seed 4";
    const auto a = run_json(args + " --workers 1");
    const auto b = run_json(args + " --workers 3");
    EXPECT_EQ(a["variance"], b["variance"]);
    const auto lib = sar2d::mc_variance(6, 6, {0.2, 0.1, 0.3}, {sar2d::NoiseKind::gaussian, 4}, 500);
    EXPECT_EQ(a["variance"].get<double>(), lib.variance);
    const auto c = run_json(args + " --k2 3 --l2 5 --noise rademacher");
    EXPECT_TRUE(c.contains("covariance"));
    EXPECT_EQ(run(args + " --noise cauchy").code, 2);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("classify --alpha 0.1").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}
