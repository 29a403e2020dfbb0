#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "amc/combinatorics.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using nlohmann::json;

namespace {

std::string g_cli;
const char* kTmp = "/tmp/amc_cli_test";

struct CmdResult {
    int status = -1;
    std::string out;
};

CmdResult run_cmd(const std::string& args, bool raw = false) {
    std::string cmd = (raw ? args : g_cli + " " + args) + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int rc = pclose(pipe);
    CmdResult res;
    res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    res.out = std::move(out);
    return res;
}

std::vector<json> json_lines(const std::string& out) {
    std::vector<json> lines;
    std::istringstream is(out);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) lines.push_back(json::parse(line));
    return lines;
}

std::string without_timing(const std::string& out) {
    std::string canon;
    for (json j : json_lines(out)) {
        j.erase("timing");
        canon += j.dump();
        canon += '\n';
    }
    return canon;
}

std::vector<std::string> split_lines(const std::string& out) {
    std::vector<std::string> lines;
    std::istringstream is(out);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("row screening costs the degree-of-freedom count every trial") {
    CmdResult res =
        run_cmd("run --gen gaussian --m 30 --n 40 --rank 5 --alg ercs --trials 5 --seed 3");
    REQUIRE(res.status == 0);
    std::vector<json> lines = json_lines(res.out);
    REQUIRE(lines.size() == 6);
    for (int t = 0; t < 5; ++t) {
        const json& line = lines[static_cast<size_t>(t)];
        CHECK(line.at("trial") == t);
        CHECK(line.at("observations") == 325);
        CHECK(line.at("r_hat") == 5);
        CHECK(line.at("success") == true);
    }
    const json& summary = lines.back();
    CHECK(summary.at("summary") == true);
    CHECK(summary.at("trials") == 5);
    CHECK(summary.at("mean_obs").get<double>() == doctest::Approx(325.0));
    CHECK(summary.at("success_rate").get<double>() == doctest::Approx(1.0));
    CHECK(summary.contains("timing"));
}

TEST_CASE("priced greedy plan on the shipped gap instance") {
    CmdResult res = run_cmd("run --fixture erhc-greedy-gap --alg erhc --trials 1 --seed 0");
    REQUIRE(res.status == 0);
    std::vector<json> lines = json_lines(res.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].at("plan_cost").get<double>() == doctest::Approx(32.0));
    CHECK(lines[0].at("cost").get<double>() == doctest::Approx(32.0));
    CHECK(lines[0].at("success") == true);
    CHECK(lines[0].at("plan_rows") == json::array({0, 1}));
    CHECK(lines[0].at("plan_cols") == json::array({0, 1}));
}

TEST_CASE("replay with the same seed is byte-identical up to timing") {
    const std::string cmd =
        "run --gen gaussian --m 20 --n 30 --rank 3 --alg err --trials 4 --seed 11";
    CmdResult a = run_cmd(cmd);
    CmdResult b = run_cmd(cmd);
    REQUIRE(a.status == 0);
    REQUIRE(b.status == 0);
    CHECK(without_timing(a.out) == without_timing(b.out));
    CHECK(a.out.find("\"timing\"") != std::string::npos);
}

TEST_CASE("worker pool does not change trial output") {
    const std::string cmd =
        "run --gen gaussian --m 20 --n 30 --rank 3 --alg err --trials 6 --seed 11";
    CmdResult seq = run_cmd(cmd);
    CmdResult par = run_cmd("AMC_WORKERS=4 " + g_cli + " " + cmd, true);
    REQUIRE(seq.status == 0);
    REQUIRE(par.status == 0);
    CHECK(without_timing(seq.out) == without_timing(par.out));
}

TEST_CASE("sweep table layout and bound satisfaction") {
    CmdResult res = run_cmd(
        "sweep --axis r --values 2,3 --m 20 --n 30 --algs ercs,err --classes ii --trials 2 "
        "--seed 1");
    REQUIRE(res.status == 0);
    std::vector<std::string> lines = split_lines(res.out);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "axis,alg,class,mean_obs,std_obs,success_rate,mean_cost,bound,bound_ok");
    CHECK(lines[1].rfind("2,ercs,ii,", 0) == 0);
    CHECK(lines[2].rfind("2,err,ii,", 0) == 0);
    CHECK(lines[3].rfind("3,ercs,ii,", 0) == 0);
    CHECK(lines[4].rfind("3,err,ii,", 0) == 0);
    for (size_t i = 1; i < lines.size(); ++i) {
        CHECK(lines[i].find(",1.000000,") != std::string::npos);
        CHECK(lines[i].rfind(",1.000000") == lines[i].size() - 9);
    }
}

TEST_CASE("sweep with no axis values prints only the header") {
    CmdResult res = run_cmd("sweep --axis r --m 20 --n 30 --algs ercs --classes ii --trials 1");
    REQUIRE(res.status == 0);
    std::vector<std::string> lines = split_lines(res.out);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0] == "axis,alg,class,mean_obs,std_obs,success_rate,mean_cost,bound,bound_ok");
}

TEST_CASE("closed-form queries as json") {
    CmdResult res = run_cmd("oracle first-one --m 20 --k 3");
    REQUIRE(res.status == 0);
    std::vector<json> lines = json_lines(res.out);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].at("mean").get<double>() == doctest::Approx(21.0 / 4.0));
    CHECK(lines[0].at("tail_beyond_a").get<double>() == doctest::Approx(17.0 / 20.0));

    res = run_cmd("oracle bounds --m 40 --n 60 --r 4 --psi-u 37 --psi-v 57 --eps 0.1");
    REQUIRE(res.status == 0);
    lines = json_lines(res.out);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].at("err_bound").get<double>() ==
          doctest::Approx(amc::err_bound(40, 60, 4, 37, 57, 0.1)));
}

TEST_CASE("generated matrices ship with a profile sidecar and reload cleanly") {
    std::filesystem::create_directories(kTmp);
    std::string mat = std::string(kTmp) + "/gen.csv";
    std::string side = std::string(kTmp) + "/gen.profile.json";

    CmdResult gen =
        run_cmd("gen --gen gaussian --m 12 --n 9 --r 3 --seed 5 --out " + mat);
    REQUIRE(gen.status == 0);
    REQUIRE(std::filesystem::exists(mat));
    REQUIRE(std::filesystem::exists(side));
    std::ifstream sf(side);
    json profile = json::parse(sf);
    CHECK(profile.at("m") == 12);
    CHECK(profile.at("n") == 9);
    CHECK(profile.at("noise").at("kind") == "none");
    CHECK(profile.at("column_space").at("r") == 3);
    CHECK(profile.at("column_space").at("violations").empty());
    CHECK(profile.at("row_space").at("violations").empty());
    CHECK(profile.at("generator").at("rank") == 3);

    CmdResult run = run_cmd("run --input " + mat + " --alg err --rank 3 --trials 2 --seed 7");
    REQUIRE(run.status == 0);
    std::vector<json> lines = json_lines(run.out);
    REQUIRE(lines.size() == 3);
    for (int t = 0; t < 2; ++t) {
        CHECK(lines[static_cast<size_t>(t)].at("observations") == (12 + 9 - 3) * 3);
        CHECK(lines[static_cast<size_t>(t)].at("success") == true);
    }
}

TEST_CASE("generator noise forms and coherence aliases") {
    std::filesystem::create_directories(kTmp);
    std::string mat = std::string(kTmp) + "/noisy.csv";
    std::string side = std::string(kTmp) + "/noisy.profile.json";

    CmdResult gen = run_cmd(
        "gen --gen gaussian --m 12 --n 10 --r 3 --noise sparse:2 --seed 9 --out " + mat);
    REQUIRE(gen.status == 0);
    std::ifstream sf(side);
    json profile = json::parse(sf);
    CHECK(profile.at("noise").at("kind") == "sparse");
    CHECK(profile.at("noise").at("count") == 2);
    CHECK(profile.at("noise").at("injected_columns").size() == 2);
    CHECK(profile.at("column_space").at("r") == 5);

    CmdResult bounded = run_cmd(
        "gen --gen gaussian --m 12 --n 10 --r 3 --noise bounded:0.1 --seed 9 --out " + mat);
    REQUIRE(bounded.status == 0);
    std::ifstream bf(side);
    json bprofile = json::parse(bf);
    CHECK(bprofile.at("noise").at("kind") == "bounded");
    CHECK(bprofile.at("noise").at("eps").get<double>() == doctest::Approx(0.1));

    CmdResult coherent = run_cmd(
        "gen --gen classes --m 12 --n 10 --r 3 --coherent-cols 1 --seed 2 --out " + mat);
    REQUIRE(coherent.status == 0);
    std::ifstream cf(side);
    json cprofile = json::parse(cf);
    CHECK(cprofile.at("column_space").at("psi") == 1);
    CHECK(cprofile.at("column_space").at("mu").get<double>() == doctest::Approx(4.0));
}

TEST_CASE("corrupted-column run reports flagged and injected sets") {
    CmdResult res = run_cmd(
        "run --gen gaussian --m 20 --n 60 --rank 3 --alg eerei --noise sparse:3 --psi-u 18 "
        "--psi-v 58 --xi 3 --trials 1 --seed 42");
    REQUIRE(res.status == 0);
    std::vector<json> lines = json_lines(res.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].at("injected_columns").size() == 3);
    CHECK(lines[0].at("flagged_columns") == lines[0].at("injected_columns"));
}

TEST_CASE("streaming noisy run exposes per-column bookkeeping") {
    CmdResult res = run_cmd(
        "run --gen gaussian --m 40 --n 60 --rank 3 --alg lrebn --mu 2 --d-scale 0.5 --eps 0 "
        "--delta 0.05 --adaptive on --trials 1 --seed 13");
    REQUIRE(res.status == 0);
    std::vector<json> lines = json_lines(res.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].at("r_hat") == 3);
    CHECK(lines[0].at("success") == true);
    CHECK(lines[0].at("column_d").size() == 60);
    CHECK(lines[0].at("angles").size() == 3);
}

TEST_CASE("config files feed flags and the command line wins") {
    std::filesystem::create_directories(kTmp);
    std::string cfg = std::string(kTmp) + "/run.cfg";
    {
        std::ofstream f(cfg);
        f << "alg=ercs\nm=30\nn=40\nrank=5\ntrials=2\nseed=3\n";
    }
    CmdResult from_config = run_cmd("run --config " + cfg);
    REQUIRE(from_config.status == 0);
    CmdResult from_flags =
        run_cmd("run --alg ercs --m 30 --n 40 --rank 5 --trials 2 --seed 3");
    REQUIRE(from_flags.status == 0);
    CHECK(without_timing(from_config.out) == without_timing(from_flags.out));

    CmdResult overridden = run_cmd("run --config " + cfg + " --trials 1");
    REQUIRE(overridden.status == 0);
    std::vector<json> lines = json_lines(overridden.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines.back().at("trials") == 1);
}

TEST_CASE("exit codes distinguish config errors from runtime failures") {
    CHECK(run_cmd("run --alg no-such-alg --m 10 --n 10 --rank 2").status == 2);
    CHECK(run_cmd("run --gen gaussian --m 300 --n 40 --rank 3 --alg ercs").status == 2);
    CHECK(run_cmd("run --no-such-flag").status == 2);
    CHECK(run_cmd("run --input /nonexistent/matrix.csv --alg ercs").status == 1);
    CHECK(run_cmd("verify walkthrough").status == 0);
    CHECK(run_cmd("verify no-such-suite").status == 2);
}

int cli_main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <amc-binary> [doctest options]\n");
        return 1;
    }
    g_cli = argv[1];
    doctest::Context context(argc - 1, argv + 1);
    return context.run();
}

int main(int argc, char** argv) { return cli_main(argc, argv); }
