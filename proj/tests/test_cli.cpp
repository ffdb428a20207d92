#include "../tools/cli.hpp"
#include "rcthermo/metrology.hpp"

#include <catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using Catch::Approx;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = rcthermo::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("rcthermo_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<std::vector<std::string>> read_csv(const fs::path &p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("usage errors exit with 2", "[cli]") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    const auto r = run({"snr-curve", "--n", "two"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("ohmic reaction coordinate", "[cli]") {
    const auto r = run({"rc-params", "--kind", "ohmic", "--gamma", "1", "--cutoff", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("omega = 3.46410161513") != std::string::npos);
    CHECK(r.out.find("lambda = 0.75983568565") != std::string::npos);
}

TEST_CASE("divergent brownian moments are reported as json", "[cli]") {
    const auto r = run({"rc-params", "--kind", "brownian", "--gamma", "0.01", "--omega0", "15", "--lambda0", "5"});
    CHECK(r.code == 1);
    const auto j = nlohmann::json::parse(r.err);
    CHECK(j["error"] == "quadrature");
    CHECK(j["achieved_error"].get<double>() > 0.0);
    CHECK(j["message"].get<std::string>().find("omega_max") != std::string::npos);
}

TEST_CASE("domain errors exit with 1", "[cli]") {
    const auto dir = scratch_dir("domain");
    const auto r = run({"snr-curve", "--n", "0", "--out", dir.string()});
    CHECK(r.code == 1);
    CHECK(nlohmann::json::parse(r.err)["error"] == "domain");
    const auto cap = run({"snr-curve", "--n", "12", "--m", "50", "--out", dir.string()});
    CHECK(cap.code == 1);
    CHECK(cap.err.find("dimension cap") != std::string::npos);
}

TEST_CASE("uncoupled snr curve reproduces the reference", "[cli]") {
    const auto dir = scratch_dir("snr");
    const auto r = run({"snr-curve", "--n", "2", "--m", "8", "--lambda", "0", "--t-min", "0.05", "--t-max", "20",
                        "--points", "15", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(dir / "snr_curve.csv");
    REQUIRE(rows.size() == 16);
    CHECK(rows[0][8] == "snr_optimal");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t = std::stod(rows[i][6]);
        const double snr = std::stod(rows[i][8]);
        CHECK(snr == Approx(rcthermo::weak_coupling_snr(2, 1.0, t)).epsilon(1e-8));
        CHECK(std::stod(rows[i][11]) == Approx(snr).epsilon(1e-8));
    }
    std::ifstream manifest(dir / "manifest.txt");
    std::string first;
    std::getline(manifest, first);
    CHECK(first.rfind("tool_version", 0) == 0);
}

TEST_CASE("delta rescales reported energies", "[cli]") {
    const auto a = scratch_dir("delta1");
    const auto b = scratch_dir("delta2");
    REQUIRE(run({"snr-curve", "--m", "10", "--lambda", "3", "--temps", "0.5,2", "--out", a.string()}).code == 0);
    REQUIRE(run({"snr-curve", "--m", "10", "--lambda", "3", "--temps", "0.5,2", "--delta", "2", "--out", b.string()})
                .code == 0);
    const auto ra = read_csv(a / "snr_curve.csv");
    const auto rb = read_csv(b / "snr_curve.csv");
    REQUIRE(ra.size() == 3);
    REQUIRE(rb.size() == 3);
    for (std::size_t i = 1; i < 3; ++i) {
        CHECK(std::stod(rb[i][2]) == 2.0);
        CHECK(std::stod(rb[i][4]) == Approx(2.0 * std::stod(ra[i][4])));
        CHECK(std::stod(rb[i][6]) == Approx(2.0 * std::stod(ra[i][6])));
        CHECK(rb[i][8] == ra[i][8]);
    }
}

TEST_CASE("coupling sweep at fixed temperatures", "[cli]") {
    const auto dir = scratch_dir("lambda");
    const auto r = run({"sweep-lambda", "--n", "1", "--m", "8", "--lambda-min", "0.5", "--lambda-max", "5",
                        "--lambda-points", "4", "--temps", "0.1,1", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(read_csv(dir / "sweep_lambda.csv").size() == 1 + 4 * 2);
}

TEST_CASE("configuration file with flag override", "[cli]") {
    const auto dir = scratch_dir("config");
    fs::create_directories(dir);
    std::ofstream(dir / "run.cfg") << "n_spins = 1\nboson_levels = 6\nlambdas = 1, 2\ntemperatures = 0.5\n";
    const auto r = run({"snr-curve", "--config", (dir / "run.cfg").string(), "--m", "7", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(dir / "snr_curve.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][1] == "7");
    CHECK(rows[2][4] == "2");
}

TEST_CASE("truncation check subcommand", "[cli]") {
    const auto dir = scratch_dir("converge");
    const auto r = run({"converge-m", "--n", "1", "--m", "10", "--delta-m", "5", "--lambda", "0,2", "--points", "6",
                        "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(dir / "converge.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][1] == "10");
    CHECK(rows[1][2] == "15");
}

TEST_CASE("figure pipeline from the command line", "[cli]") {
    const auto dir = scratch_dir("figure");
    const auto r = run({"figure", "fig2", "--m", "10", "--points", "6", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(read_csv(dir / "fig2.csv").size() == 1 + 4 * 6);
    CHECK(fs::exists(dir / "manifest_fig2.txt"));
    CHECK(run({"figure", "fig9", "--out", dir.string()}).code == 1);
    CHECK(run({"figure", "fig2", "--delta", "2", "--out", dir.string()}).code == 1);
}
