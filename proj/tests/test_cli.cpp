#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mgsim/config.hpp"

namespace fs = std::filesystem;

namespace {
struct CmdResult {
    int exit_code = -1;
    std::string output;
};

CmdResult run_cli(const std::string& args) {
    const std::string cmd = std::string(MGSIM_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    CmdResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("mgsim_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("print-defaults emits a parsable config that round-trips") {
    const CmdResult r = run_cli("print-defaults");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("r_load = 145.2") != std::string::npos);
    CHECK(r.output.find("c = 4.8162e-06") != std::string::npos);
    CHECK(r.output.find("kp_v = 0.2") != std::string::npos);
    CHECK(r.output.find("ki_v = 100") != std::string::npos);
    const mgsim::FullConfig parsed = mgsim::parse_config(r.output);
    CHECK(mgsim::print_config(parsed) == r.output);
}

TEST_CASE("run writes the artifact set") {
    const fs::path dir = fresh_dir("run");
    const CmdResult r =
        run_cli("run --fsw 0 --t-end 0.2 --out " + dir.string());
    CHECK(r.exit_code == 0);
    for (const char* name : {"timeseries.csv", "metrics.txt", "fig_tracking.csv",
                             "fig_power.csv", "fig_spectrum.csv", "fig_tracking.gp",
                             "fig_power.gp", "fig_spectrum.gp"})
        CHECK(fs::exists(dir / name));
    const std::string head = slurp(dir / "timeseries.csv").substr(0, 200);
    CHECK(head.find("t,va,vb,vc_phase,vref_alpha") == 0);
    fs::remove_all(dir);
}

TEST_CASE("run --frame dq writes dq-labeled columns") {
    const fs::path dir = fresh_dir("run_dq");
    const CmdResult r = run_cli("run --frame dq --fsw 0 --t-end 0.2 --out " + dir.string());
    CHECK(r.exit_code == 0);
    const std::string head = slurp(dir / "timeseries.csv").substr(0, 200);
    CHECK(head.find("vref_d,vref_q,v_d,v_q") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("missing config file exits 1 with the path, writing nothing") {
    const fs::path dir = fresh_dir("missing");
    const CmdResult r =
        run_cli("run --config /no/such/file.conf --out " + dir.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("/no/such/file.conf") != std::string::npos);
    CHECK(!fs::exists(dir));
}

TEST_CASE("invalid flag value exits 1") {
    const fs::path dir = fresh_dir("badframe");
    const CmdResult r = run_cli("run --frame xy --out " + dir.string());
    CHECK(r.exit_code == 1);
    CHECK(!fs::exists(dir));
}

TEST_CASE("config that diverges exits 2 and names the failure time") {
    const fs::path dir = fresh_dir("div");
    const fs::path conf = fs::temp_directory_path() / "mgsim_cli_div.conf";
    {
        std::ofstream out(conf);
        out << "[plant]\nfsw = 0\n[sim]\nts_control = 5e-4\nh_plant = 5e-4\n";
    }
    const CmdResult r =
        run_cli("run --config " + conf.string() + " --out " + dir.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("diverged") != std::string::npos);
    CHECK(r.output.find("t = ") != std::string::npos);
    fs::remove_all(dir);
    fs::remove(conf);
}

TEST_CASE("compare writes per-frame artifacts and the comparison report") {
    const fs::path dir = fresh_dir("cmp");
    const CmdResult r = run_cli("compare --fsw 0 --t-end 0.2 --out " + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "ab" / "timeseries.csv"));
    CHECK(fs::exists(dir / "dq" / "timeseries.csv"));
    const std::string cmp = slurp(dir / "comparison.txt");
    CHECK(cmp.find("thd_ab_pct:") != std::string::npos);
    CHECK(cmp.find("thd_dq_pct:") != std::string::npos);
    // averaged PWM produces no switching harmonics to rank
    CHECK(cmp.find("not meaningful") != std::string::npos);
    fs::remove_all(dir);
}
