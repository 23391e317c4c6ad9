#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#ifndef ZD_CLI_PATH
#error "ZD_CLI_PATH must point at the command-line binary"
#endif

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ZD_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() /
                       ("zd_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

// parse a field.csv produced by the eval subcommand
std::vector<std::pair<double, double>> read_field(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "x,value,ell,caustic_flag");
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        const double x = std::stod(cell);
        std::getline(ls, cell, ',');
        rows.emplace_back(x, std::stod(cell));
    }
    return rows;
}

const char* kStepJson = R"({"type":"step","left":-1.0,"right":1.0,"height":1.0})";
const char* kLorentzJson = R"({"type":"rational","poles":[[0.0,1.0]],"residues":[[0.0,-0.5]]})";

}  // namespace

TEST_CASE("eval emits a field and a manifest", "[cli]") {
    const fs::path dir = scratch_dir("eval");
    write_file(dir / "step.json", kStepJson);
    const int rc = run_cli("eval --datum " + (dir / "step.json").string() +
                           " --backend closedform --t 1 --grid=-2:4:121 --out " +
                           dir.string());
    REQUIRE(rc == 0);
    const auto rows = read_field(dir / "field.csv");
    REQUIRE(rows.size() == 121);
    REQUIRE(rows.front().first == Catch::Approx(-2.0));
    REQUIRE(rows.back().first == Catch::Approx(4.0));
    // peak of the tent profile at x = 1
    double peak = 0.0;
    for (const auto& [x, v] : rows) peak = std::max(peak, v);
    REQUIRE(peak == Catch::Approx(1.0));

    const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    REQUIRE(manifest["backends"] == nlohmann::json::array({"closedform"}));
    REQUIRE(manifest["grid"] == "-2:4:121");
    REQUIRE(manifest["datum"]["type"] == "step");
    REQUIRE(manifest["wall_clock_seconds"].get<double>() >= 0.0);
    REQUIRE(manifest["outputs"].size() == 1);
    fs::remove_all(dir);
}

TEST_CASE("eval via the polynomial route hits the frozen value", "[cli]") {
    const fs::path dir = scratch_dir("rational");
    write_file(dir / "lorentz.json", kLorentzJson);
    const int rc = run_cli("eval --datum " + (dir / "lorentz.json").string() +
                           " --backend rational --t 0.1 --grid 0:0:1 --out " +
                           dir.string());
    REQUIRE(rc == 0);
    const auto rows = read_field(dir / "field.csv");
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].second == Catch::Approx(0.96414965481456477).margin(1e-9));
    fs::remove_all(dir);
}

TEST_CASE("backend mismatches exit with a diagnostic", "[cli]") {
    const fs::path dir = scratch_dir("bad");
    write_file(dir / "step.json", kStepJson);
    // raw step cannot ride the characteristic backend
    REQUIRE(run_cli("eval --datum " + (dir / "step.json").string() +
                    " --backend characteristics --t 0.5 --out " + dir.string()) == 2);
    REQUIRE(run_cli("eval --datum " + (dir / "step.json").string() +
                    " --backend bogus --out " + dir.string()) == 2);
    // missing required --datum is a parse error
    REQUIRE(run_cli("eval --backend closedform") != 0);
    REQUIRE(run_cli("") != 0);  // a subcommand is required
    fs::remove_all(dir);
}

TEST_CASE("fixtures are byte-deterministic", "[cli]") {
    const fs::path a = scratch_dir("fix_a");
    const fs::path b = scratch_dir("fix_b");
    REQUIRE(run_cli("fixtures --out " + a.string()) == 0);
    REQUIRE(run_cli("fixtures --out " + b.string()) == 0);
    for (const char* name : {"zd_step_t0.25.csv", "zd_step_t1.csv", "zd_step_t2.csv"}) {
        REQUIRE(fs::exists(a / name));
        REQUIRE(slurp(a / name) == slurp(b / name));
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("backend comparison reports the pairwise gap", "[cli]") {
    const fs::path dir = scratch_dir("compare");
    write_file(dir / "lorentz.json", kLorentzJson);
    const int rc = run_cli("compare-backends --datum " + (dir / "lorentz.json").string() +
                           " --t 0.1 --grid=-1:1:21 --backends characteristics,rational" +
                           " --out " + dir.string());
    REQUIRE(rc == 0);
    REQUIRE(fs::exists(dir / "field_characteristics.csv"));
    REQUIRE(fs::exists(dir / "field_rational.csv"));
    const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    REQUIRE(manifest["extra"]["max_pairwise_difference"].get<double>() < 1e-8);
    fs::remove_all(dir);
}

TEST_CASE("sweep at a zero horizon measures quadrature error only", "[cli]") {
    const fs::path dir = scratch_dir("sweep_t0");
    write_file(dir / "mstep.json",
               R"({"type":"mollified","delta":0.05,)"
               R"("base":{"type":"step","left":-1.0,"right":1.0,"height":1.0}})");
    const int rc = run_cli("eps-sweep --datum " + (dir / "mstep.json").string() +
                           " --t 0 --epsilons 0.2,0.1,0.05 --out " + dir.string());
    REQUIRE(rc == 0);
    std::ifstream in(dir / "eps_sweep.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "epsilon,phi_id,gap");
    int rows = 0;
    while (std::getline(in, line)) {
        const double gap = std::stod(line.substr(line.rfind(',') + 1));
        REQUIRE(gap <= 1e-6);  // no evolution happened: both pairings see u0
        ++rows;
    }
    REQUIRE(rows == 9);
    fs::remove_all(dir);
}
