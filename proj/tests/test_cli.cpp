#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef GHZPULSE_BIN
#define GHZPULSE_BIN "ghzpulse"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(GHZPULSE_BIN) + " " + args + " 2>&1";
    std::array<char, 512> buf{};
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    const int status = pclose(pipe);
    r.exit_code = WEXITSTATUS(status);
    return r;
}

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write(const std::filesystem::path& p, const std::string& s) {
    std::ofstream out(p);
    out << s;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("design subcommand verifies the design point") {
    const RunResult r = run("design");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("a0 = 0.7274788") != std::string::npos);
    CHECK(r.output.find("A0 = 0.9577891") != std::string::npos);
    CHECK(r.output.find("design verification: OK") != std::string::npos);
}

TEST_CASE("simulate on a minimal config") {
    const auto dir = temp_dir("ghz_cli_sim");
    const auto cfg = dir / "cfg.json";
    write(cfg, R"({"pulse": {"family": "rectangular", "k": 1},
                   "physics": {"n": 2, "eta": 0.03}})");
    const RunResult r = run("simulate --config " + cfg.string() + " --out " + dir.string());
    CHECK(r.exit_code == 0);
    const std::string js = slurp(dir / "result.json");
    CHECK(js.find("\"fidelity\"") != std::string::npos);
    CHECK(js.find("\"blocks\"") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "run_meta.json"));

    // determinism: identical config -> byte-identical result.json
    const auto dir2 = temp_dir("ghz_cli_sim2");
    const RunResult r2 = run("simulate --config " + cfg.string() + " --out " + dir2.string());
    CHECK(r2.exit_code == 0);
    CHECK(slurp(dir2 / "result.json") == js);
}

TEST_CASE("malformed configs exit 2 and name the offending key") {
    const auto dir = temp_dir("ghz_cli_bad");
    const auto bad1 = dir / "bad1.json";
    write(bad1, R"({"pulse": {"family": "rectangular", "frobnicate": 3},
                    "physics": {"n": 2, "eta": 0.03}})");
    RunResult r = run("simulate --config " + bad1.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("frobnicate") != std::string::npos);

    const auto bad2 = dir / "bad2.json";
    write(bad2, R"({"pulse": {"family": "rectangular"}})");
    r = run("simulate --config " + bad2.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("physics") != std::string::npos);

    const auto bad3 = dir / "bad3.json";
    write(bad3, "{ not json");
    r = run("simulate --config " + bad3.string());
    CHECK(r.exit_code == 2);

    r = run("simulate --config " + (dir / "missing.json").string());
    CHECK(r.exit_code == 2);
}

TEST_CASE("simulate exits 3 when the step ladder cannot converge") {
    const auto dir = temp_dir("ghz_cli_conv");
    const auto cfg = dir / "cfg.json";
    write(cfg, R"({"pulse": {"family": "lemniscate"},
                   "physics": {"n": 2, "eta": 0.03},
                   "solver": {"step_tol": 1e-30, "max_doublings": 0,
                              "verify_cutoff": false}})");
    const RunResult r = run("simulate --config " + cfg.string() + " --out " + dir.string());
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("convergence failure") != std::string::npos);
}

TEST_CASE("chain subcommand prints the parameter table") {
    const RunResult r = run("chain --n-min 2 --n-max 5 --radial-mhz 3 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("n,anisotropy,omega_axial_max_hz,eta") != std::string::npos);
    CHECK(r.output.find("\n2,") != std::string::npos);
    CHECK(r.output.find("\n5,") != std::string::npos);
}

TEST_CASE("scan subcommand writes figure csv") {
    const auto dir = temp_dir("ghz_cli_scan");
    const auto cfg = dir / "scan.json";
    write(cfg, R"({"scan": {"type": "amplitude", "k": 1, "family": "rectangular",
                            "domega": {"lo": 0.0, "hi": 0.004, "count": 5}, "refine": false},
                   "physics": {"n": 2, "eta": 0.03},
                   "solver": {"time_steps": 512}})");
    const RunResult r = run("scan --config " + cfg.string() + " --out " + dir.string());
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir / "fig2.csv");
    CHECK(csv.rfind("n,domega_rel,infidelity,analytic_cross,error\n", 0) == 0);
    // 5 grid rows + 1 analytic cross row + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(csv.find(",1,") != std::string::npos);

    // unknown scan type
    const auto bad = dir / "bad.json";
    write(bad, R"({"scan": {"type": "mystery"}, "physics": {"n": 2, "eta": 0.03}})");
    CHECK(run("scan --config " + bad.string()).exit_code == 2);
}

TEST_CASE("design export writes pulse and trajectory tables") {
    const auto dir = temp_dir("ghz_cli_export");
    const RunResult r = run("design --export " + dir.string());
    CHECK(r.exit_code == 0);
    for (const std::string fam :
         {"rectangular", "echoed_rectangular", "lemniscate", "echoed_lemniscate"}) {
        CHECK(std::filesystem::exists(dir / ("pulse_" + fam + ".csv")));
        CHECK(std::filesystem::exists(dir / ("trajectory_" + fam + ".csv")));
    }
    const std::string t = slurp(dir / "trajectory_lemniscate.csv");
    CHECK(t.rfind("t,re_alpha,im_alpha\n", 0) == 0);
}
