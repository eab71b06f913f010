#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
    int code;
    std::string out;
};

// stderr is folded into the captured output with 2>&1 when asked
Run run(const std::string& args, bool with_stderr = false) {
    const std::string cmd = std::string(PAINLEVE_CLI) + " " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string config(const std::string& name) { return std::string(PAINLEVE_CONFIGS) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << body;
    return path;
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string& header) {
    std::istringstream in(text);
    std::getline(in, header);
    std::vector<std::vector<double>> rows;
    for (std::string line; std::getline(in, line);) {
        std::vector<double> row;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST(Cli, IntegrateRationalSeed) {
    auto r = run("integrate --config " + config("rational_seed.json"));
    ASSERT_EQ(r.code, 0);
    std::string header;
    auto rows = parse_csv(r.out, header);
    EXPECT_EQ(header, "t_re,t_im,q_re,q_im,p_re,p_im,H_re,H_im");
    ASSERT_GT(rows.size(), 2u);
    for (const auto& row : rows) {
        ASSERT_EQ(row.size(), 8u);
        EXPECT_NEAR(row[2], std::sqrt(row[0]), 1e-9);
        EXPECT_NEAR(row[3], 0.0, 1e-9);
        EXPECT_NEAR(row[4], 0.25 / std::sqrt(row[0]), 1e-9);
    }
}

TEST(Cli, IntegrateEmptySpanGivesOneRow) {
    auto path = write_temp("empty_span.json", R"({"params": {"v1": 0, "v2": 0}, "initial": {"t": 1.5, "q": 0.2, "p": 0.3}, "t_end": 1.5})");
    auto r = run("integrate --config " + path);
    ASSERT_EQ(r.code, 0);
    std::string header;
    EXPECT_EQ(parse_csv(r.out, header).size(), 1u);
}

TEST(Cli, PoleIsAnError) {
    auto r = run("integrate --config " + config("pole.json"), true);
    EXPECT_EQ(r.code, 2);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["error"]["kind"], "PoleEncountered");
}

TEST(Cli, BadConfigIsAnError) {
    auto path = write_temp("bad.json", R"({"params": {"v1": "x"}})");
    auto r = run("integrate --config " + path, true);
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(nlohmann::json::parse(r.out)["error"]["kind"], "ConfigError");
    EXPECT_EQ(run("integrate --config /does/not/exist.json").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, VerifyDefaultWindowPasses) {
    auto r = run("verify --config " + config("default_window.json"));
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["identities"].size(), 8u);
    for (const auto& id : j["identities"]) {
        EXPECT_TRUE(id["passed"].get<bool>()) << id["name"];
        EXPECT_LT(id["max_residual"].get<double>(), 1e-8) << id["name"];
    }
}

TEST(Cli, CorruptedTransformFails) {
    auto r = run("verify --config " + config("corrupted_w.json"));
    EXPECT_EQ(r.code, 3);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_FALSE(j["passed"].get<bool>());
    for (const auto& id : j["identities"]) {
        if (id["name"] == "hsum") {
            EXPECT_FALSE(id["passed"].get<bool>());
        }
    }
}

TEST(Cli, TightToleranceFails) {
    EXPECT_EQ(run("verify --config " + config("default_window.json") + " --tol 1e-30").code, 3);
}

TEST(Cli, VerifyWeyl) {
    auto r = run("verify --config " + config("weyl.json"));
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    const auto& d = j["identities"][0]["details"];
    EXPECT_TRUE(d["T1_T2_commute"].get<bool>());
    EXPECT_TRUE(d["shift_actions"].get<bool>());
    EXPECT_LT(d["involution"].get<double>(), 1e-12);
}

TEST(Cli, Transform) {
    auto r = run("transform --config " + config("default_window.json"));
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["images"].size(), 4u);
    EXPECT_EQ(j["images"][0]["map"], "W");
    EXPECT_EQ(j["images"][0]["params"]["v1"][0].get<double>(), -1.0);
    EXPECT_EQ(j["images"][0]["state"]["t"][0].get<double>(), 0.25);

    auto g = nlohmann::json::parse(run("transform --config " + config("pii.json")).out);
    EXPECT_EQ(g["images"][0]["map"], "gambier");
    auto w = nlohmann::json::parse(run("transform --config " + config("weyl.json")).out);
    EXPECT_EQ(w["images"][0]["params"]["v1"][0].get<double>(), 1.3);
}

TEST(Cli, Classify) {
    auto j = nlohmann::json::parse(run("classify 0 1").out);
    EXPECT_EQ(j["class"], "Rational");
    EXPECT_EQ(nlohmann::json::parse(run("classify 0 0").out)["class"], "OneParameter");
    EXPECT_EQ(nlohmann::json::parse(run("classify 0.5 0.25").out)["class"], "Generic");
}

TEST(Cli, Rational) {
    auto r = run("rational 1");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["params"]["v1"][0].get<double>(), 1.0);
    EXPECT_EQ(j["params"]["v2"][0].get<double>(), 2.0);
    EXPECT_TRUE(j["residual_exactly_zero"].get<bool>());
    EXPECT_EQ(j["p"]["numerator"][0][0], "-3/4");
    EXPECT_EQ(run("rational 2 --shift T3").code, 2);
}

TEST(Cli, BesselTau) {
    auto r = run("bessel-tau --n 0 --nu 0 --c 0 --t 1");
    ASSERT_EQ(r.code, 0);
    std::string header;
    auto rows = parse_csv(r.out, header);
    EXPECT_EQ(header, "t_re,t_im,tau_re,tau_im");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0][2], 1.2660658777520082, 1e-14);
    EXPECT_EQ(run("bessel-tau --n 0 --t 5000").code, 2);
}

TEST(Cli, OutputsAreDeterministic) {
    for (const std::string& args : {"integrate --config " + config("default_window.json"),
                                   "verify --config " + config("default_window.json"), std::string("rational 3")}) {
        EXPECT_EQ(run(args).out, run(args).out) << args;
    }
}

TEST(Cli, OutFlagWritesFile) {
    const std::string path = ::testing::TempDir() + "nodes.csv";
    std::remove(path.c_str());
    ASSERT_EQ(run("integrate --config " + config("pii.json") + " --out " + path).code, 0);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "t_re,t_im,q_re,q_im,p_re,p_im,H_re,H_im");
}
