#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

#ifndef RFRAC_CLI_PATH
#error "RFRAC_CLI_PATH must point at the built binary"
#endif

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RFRAC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("torsion run writes files and exits 0") {
    const auto dir = fresh_dir("rfrac_cli_torsion");
    CHECK(run_cli("torsion --s 0.75 --domain -1,1 --n 128 --output " + dir.string()) == 0);
    CHECK(fs::exists(dir / "mesh.csv"));
    CHECK(fs::exists(dir / "torsion_solution.csv"));
    CHECK(fs::exists(dir / "torsion_report.json"));
    const auto report = nlohmann::json::parse(slurp(dir / "torsion_report.json"));
    for (const char* key : {"verdict", "s", "n", "tolerances"}) CHECK(report.contains(key));
    CHECK(report["verdict"] == "PASS");
}

TEST_CASE("identical configs give bit-identical outputs") {
    const auto dir1 = fresh_dir("rfrac_cli_det1");
    const auto dir2 = fresh_dir("rfrac_cli_det2");
    const std::string flags = "meanvalue --s 0.7 --n 128 --centers 3 --radii 2 --output ";
    CHECK(run_cli(flags + dir1.string()) == 0);
    CHECK(run_cli(flags + dir2.string()) == 0);
    for (const char* f : {"meanvalue_gaps.csv", "meanvalue_report.json"})
        CHECK(slurp(dir1 / f) == slurp(dir2 / f));
}

TEST_CASE("out-of-range parameters exit 64") {
    CHECK(run_cli("torsion --s 1.5 --n 64") == 64);
    CHECK(run_cli("torsion --s 0.75 --n 4") == 64);
    CHECK(run_cli("torsion --grading 0.5 --n 64") == 64);
    CHECK(run_cli("nosuchcommand") == 64);
}

TEST_CASE("s below 1/2 runs with the Hopf verdict suppressed") {
    const auto dir = fresh_dir("rfrac_cli_lows");
    CHECK(run_cli("torsion --s 0.4 --n 128 --output " + dir.string()) == 0);
    const auto report = nlohmann::json::parse(slurp(dir / "torsion_report.json"));
    const std::string verdict = report["hopf"]["verdict"];
    CHECK(verdict.find("suppressed") != std::string::npos);
}

TEST_CASE("coefficients beyond lambda_1 surface a solvability error") {
    CHECK(run_cli("hopf --s 0.75 --n 64 --c 5 --f 1 --output " +
                  fresh_dir("rfrac_cli_indef").string()) == 1);
}

TEST_CASE("hopf with c=0,f=1 reproduces the torsion diagnostics") {
    const auto dir_h = fresh_dir("rfrac_cli_hopf0");
    const auto dir_t = fresh_dir("rfrac_cli_tors0");
    CHECK(run_cli("hopf --s 0.75 --n 128 --c 0 --f 1 --output " + dir_h.string()) == 0);
    CHECK(run_cli("torsion --s 0.75 --n 128 --output " + dir_t.string()) == 0);
    CHECK(slurp(dir_h / "hopf_solution.csv") == slurp(dir_t / "torsion_solution.csv"));
}

TEST_CASE("kernels and converge emit their tables") {
    const auto dir = fresh_dir("rfrac_cli_kern");
    CHECK(run_cli("kernels --s 0.75 --n 64 --samples 16 --output " + dir.string()) == 0);
    CHECK(fs::exists(dir / "kernel_profile.csv"));
    CHECK(fs::exists(dir / "kappa_profile.csv"));
    const auto report = nlohmann::json::parse(slurp(dir / "kernels_report.json"));
    CHECK(report["verdict"] == "PASS");
    CHECK(std::abs(report["poisson_mass"].get<double>() - 1.0) < 1e-6);

    const auto cdir = fresh_dir("rfrac_cli_conv");
    CHECK(run_cli("converge --s 0.75 --n-list 64,128 --output " + cdir.string()) == 0);
    const std::string table = slurp(cdir / "converge_table.csv");
    CHECK(table.rfind("n,h_min,lambda1,exponent,epsilon0,max_value\n", 0) == 0);
}

TEST_CASE("negative control flips the meanvalue verdict") {
    const auto dir = fresh_dir("rfrac_cli_neg");
    CHECK(run_cli("meanvalue --s 0.75 --n 128 --centers 2 --radii 2 --negate --output " +
                  dir.string()) == 0);
    const auto report = nlohmann::json::parse(slurp(dir / "meanvalue_report.json"));
    CHECK(report["verdict"] == "NEGATIVE-CONTROL-CONFIRMED");
    CHECK(report["min_gap"].get<double>() < 0.0);
}

TEST_CASE("csv report format flattens the json") {
    const auto dir = fresh_dir("rfrac_cli_csvfmt");
    CHECK(run_cli("torsion --s 0.75 --n 64 --format csv --output " + dir.string()) == 0);
    const std::string text = slurp(dir / "torsion_report.csv");
    CHECK(text.rfind("key,value\n", 0) == 0);
    CHECK(text.find("verdict,PASS") != std::string::npos);
}
