#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pbm/cli.hpp"

using namespace pbm;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
    nlohmann::json report;
};

std::string fixture(const char* name) { return std::string(PBM_FIXTURE_DIR) + "/" + name; }

Run run(std::vector<std::string> args) {
    const auto path = std::filesystem::temp_directory_path() / "pbm_cli_test_report.json";
    std::filesystem::remove(path);
    args.push_back("--report");
    args.push_back(path.string());
    args.push_back("--workers");
    args.push_back("2");
    std::ostringstream out, err;
    Run r{run_cli(args, out, err), out.str(), err.str(), {}};
    std::ifstream in(path);
    if (in) r.report = nlohmann::json::parse(in);
    return r;
}

const nlohmann::json* check(const Run& r, const std::string& id) {
    for (const auto& c : r.report["checks"]) {
        if (c["check"] == id) return &c;
    }
    return nullptr;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check-space on the bundled example passes") {
    const auto r = run({"check-space", "--scenario", "example_2_6", "--grid", "0:100:0.5"});
    CHECK(r.code == 0);
    REQUIRE(r.report["axioms"].size() == 4);
    for (const auto& a : r.report["axioms"]) CHECK(a["pass"] == true);
    CHECK(r.report["exit_code"] == 0);
}

TEST_CASE("--b-metric adds the b-metric axioms, which the max distance fails") {
    const auto r = run({"check-space", "--scenario", "example_2_6", "--grid", "0:10:1", "--b-metric"});
    CHECK(r.code == 1);
    CHECK(r.report["b_metric_axioms"][0]["pass"] == false);
}

TEST_CASE("broken distances exit 1 with witnesses") {
    auto r = run({"check-space", "--scenario", fixture("sum_distance.scn")});
    CHECK(r.code == 1);
    CHECK(r.report["axioms"][1]["pass"] == false);
    CHECK_FALSE(r.report["axioms"][1]["witnesses"].empty());

    r = run({"check-space", "--scenario", fixture("squared_distance.scn")});
    CHECK(r.code == 1);
    const auto& p4 = r.report["axioms"][3];
    CHECK(p4["pass"] == false);
    CHECK(p4["witnesses"][0]["gap"].get<double>() > 0);
}

TEST_CASE("usage, parse and I/O errors exit 2") {
    CHECK(run({"check-space", "--scenario", "/nonexistent.scn"}).code == 2);
    CHECK(run({"check-space"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"check-space", "--scenario", "example_2_6", "--grid", "1:0:1"}).code == 2);
    CHECK(run({"check-space", "--scenario", "example_2_6", "--tol", "-1"}).code == 2);
    CHECK(run({"reproduce", "unknown-name"}).code == 2);
    std::ostringstream out, err;
    CHECK(run_cli({"check-space", "--scenario", "example_2_6", "--report", "/nonexistent/dir/r.json"}, out, err) == 2);
}

TEST_CASE("check-classes") {
    CHECK(run({"check-classes", "--scenario", "example_2_6"}).code == 0);
    const auto r = run({"check-classes", "--scenario", fixture("h_sum.scn")});
    CHECK(r.code == 1);
    const auto* c = check(r, "cclass");
    REQUIRE(c);
    CHECK((*c)["verdict"] == "fail");
}

TEST_CASE("check-hypotheses on the bundled example is all green") {
    const auto r = run({"check-hypotheses", "--scenario", "example_2_6"});
    CHECK(r.code == 0);
    for (const auto& c : r.report["checks"]) CHECK(c["verdict"] != "fail");
    const auto* tac = check(r, "tac-contraction");
    REQUIRE(tac);
    CHECK((*tac)["satisfied"].get<int>() > 0);
}

TEST_CASE("H(t, z) = t: the class check fails, the grid shows no contraction violation") {
    const auto r = run({"check-hypotheses", "--scenario", fixture("h_identity.scn")});
    CHECK(r.code == 1);
    CHECK((*check(r, "cclass"))["verdict"] == "fail");
    const auto* tac = check(r, "tac-contraction");
    REQUIRE(tac);
    CHECK((*tac)["verdict"] == "pass");
    CHECK((*tac)["violated"] == 0);
}

TEST_CASE("an identically closed gate passes vacuously and says so") {
    const auto r = run({"check-hypotheses", "--scenario", fixture("closed_gate.scn")});
    CHECK(r.code == 0);
    const auto* tac = check(r, "tac-contraction");
    REQUIRE(tac);
    CHECK((*tac)["verdict"] == "vacuous");
    CHECK((*tac)["detail"].get<std::string>().find("all pairs vacuous") != std::string::npos);
    CHECK(r.out.find("all pairs vacuous") != std::string::npos);
}

TEST_CASE("solve certifies the fixed point and lists coincidence points") {
    const auto r = run({"solve", "--scenario", "example_2_6", "--v0", "0,8,100"});
    CHECK(r.code == 0);
    REQUIRE(r.report["traces"].size() == 3);
    for (const auto& t : r.report["traces"]) {
        CHECK(t["status"] == "converged");
        CHECK(t["limit"] == 0.0);
        CHECK(t["certificate"]["certified"] == true);
    }
    const auto& pairs = r.report["coincidence"]["pairs"];
    CHECK(pairs[0]["points"].size() == 2);
    CHECK(pairs[1]["points"].size() == 1);
    CHECK(r.report["uniqueness"]["unique"] == true);
}

TEST_CASE("solve from the fixed point alone") {
    const auto r = run({"solve", "--scenario", "example_2_6", "--v0", "0"});
    CHECK(r.code == 0);
    CHECK(r.report["traces"][0]["iterations"] == 6);
}

TEST_CASE("solve fails when no start converges") {
    const auto r = run({"solve", "--scenario", "corollary_2_4_demo", "--v0", "1", "--max-iters", "3"});
    CHECK(r.code == 1);
    CHECK(r.report["traces"][0]["status"] == "max_iters");
}

TEST_CASE("solve on the cyclic demo certifies 0") {
    const auto r = run({"solve", "--scenario", "corollary_2_4_demo"});
    CHECK(r.code == 0);
    for (const auto& t : r.report["traces"]) CHECK(std::abs(t["limit"].get<double>()) <= 1e-9);
}

TEST_CASE("coincidence subcommand") {
    const auto r = run({"coincidence", "--scenario", "example_2_6"});
    CHECK(r.code == 0);
    CHECK((*check(r, "weak-compatibility-h-Q"))["verdict"] == "pass");
}

TEST_CASE("reproduce: every bundled name is confirmed") {
    for (const char* name : {"example-2-6", "example-2-2", "corollary-2-4-demo", "corollary-2-5-demo"}) {
        const auto r = run({"reproduce", name});
        INFO(name);
        CHECK(r.code == 0);
        for (const auto& c : r.report["confirmations"]) CHECK(c["confirmed"] == true);
    }
    const auto r = run({"reproduce", "example_2_2"});
    CHECK(r.report["confirmations"].size() == 1);
    CHECK(r.report.contains("traces") == false);
}

TEST_CASE("timings only appear when asked for") {
    CHECK_FALSE(run({"reproduce", "example-2-2"}).report.contains("timings_seconds"));
    CHECK(run({"reproduce", "example-2-2", "--timings"}).report.contains("timings_seconds"));
}

TEST_CASE("help exits 0") {
    std::ostringstream out, err;
    CHECK(run_cli({"--help"}, out, err) == 0);
    CHECK(out.str().find("reproduce") != std::string::npos);
}

}  // TEST_SUITE
