#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rqk/amplitudes.hpp"

using namespace rqk;
namespace fs = std::filesystem;

namespace {

const fs::path work = fs::temp_directory_path() / "rqk_cli_test";

int run(const std::string& args, std::string* stderr_text = nullptr) {
    const fs::path errfile = work / "stderr.txt";
    const std::string cmd = std::string(RQK_CLI_PATH) + " " + args + " > " +
                            (work / "stdout.txt").string() + " 2> " + errfile.string();
    const int rc = std::system(cmd.c_str());
    if (stderr_text) {
        std::ifstream in(errfile);
        std::stringstream ss;
        ss << in.rdbuf();
        *stderr_text = ss.str();
    }
    return WEXITSTATUS(rc);
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Parsed CSV rows (header skipped).
std::vector<std::vector<double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

struct Setup {
    Setup() { fs::create_directories(work); }
} setup;

}  // namespace

TEST_CASE("causality defaults reproduce the benchmark row and exit 0") {
    const fs::path out = work / "causality";
    REQUIRE(run("causality --out " + out.string()) == 0);
    const auto rows = read_csv(out / "causality.csv");
    REQUIRE(rows.size() == 100);
    bool found = false;
    for (const auto& row : rows)
        if (row[0] == doctest::Approx(5.0).epsilon(1e-12)) {
            found = true;
            CHECK(row[1] == doctest::Approx(0.996958).epsilon(2e-4));
        }
    CHECK(found);
    CHECK(fs::exists(out / "manifest.json"));
    const std::string manifest = read_file(out / "manifest.json");
    CHECK(manifest.find("\"config_hash\"") != std::string::npos);
    CHECK(manifest.find("\"checks\"") != std::string::npos);
}

TEST_CASE("repeated runs of the same config produce byte-identical CSV") {
    const fs::path out1 = work / "rep1", out2 = work / "rep2";
    REQUIRE(run("causality --serial --rho-max 3 --out " + out1.string()) == 0);
    REQUIRE(run("causality --serial --rho-max 3 --out " + out2.string()) == 0);
    CHECK(read_file(out1 / "causality.csv") == read_file(out2 / "causality.csv"));
}

TEST_CASE("transform with an empty transformation list reproduces the input") {
    write_file(work / "identity.json", R"({
        "particle": {"mass": 1.0, "two_s": 0, "parity": 1},
        "gaussian": {"pbar": [0.3, 0.0, -0.1], "sigma_p": 1.0, "xbar": [0.2, 0.4, 0.0]},
        "transformations": [],
        "samples": {"axis": "z", "min": -2.0, "max": 2.0, "count": 21}
    })");
    const fs::path out = work / "identity";
    REQUIRE(run("transform --config " + (work / "identity.json").string() + " --out " +
                out.string()) == 0);

    const ParticleSpec pt(1.0, SpinValue::of_two_s(0), 1);
    const auto psi = MomentumAmplitude::gaussian(pt, Vec3(0.3, 0.0, -0.1), 1.0,
                                                 Vec3(0.2, 0.4, 0.0),
                                                 Eigen::VectorXcd::Ones(1));
    const auto rows = read_csv(out / "transform_samples.csv");
    REQUIRE(rows.size() == 21);
    for (const auto& row : rows) {
        const double expected = std::abs(psi.evaluate(Vec3(0.0, 0.0, row[0]))(0));
        CHECK(row[1] == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("unknown config keys are rejected with the offending path") {
    write_file(work / "bad_key.json", R"({
        "particle": {"mass": 1.0, "two_s": 0, "parity": 1},
        "gaussian": {"pbar": [0, 0, 0], "sigma_p": 1.0},
        "transformatoins": []
    })");
    std::string err;
    CHECK(run("transform --config " + (work / "bad_key.json").string() + " --out " +
              (work / "bad").string(),
              &err) == 2);
    CHECK(err.find("$.transformatoins") != std::string::npos);
    CHECK(err.find("unknown key") != std::string::npos);
}

TEST_CASE("superluminal boost velocity is rejected citing the bound") {
    write_file(work / "fast.json", R"({
        "particle": {"mass": 1.0, "two_s": 0, "parity": 1},
        "gaussian": {"pbar": [0.4, 0.0, 0.2], "sigma_p": 0.1},
        "beta0": [1.2, 0.0, 0.0]
    })");
    std::string err;
    CHECK(run("boost-position --config " + (work / "fast.json").string() + " --out " +
              (work / "fast").string(),
              &err) == 2);
    CHECK(err.find("velocity bound") != std::string::npos);
    CHECK(err.find("|beta0| < 1") != std::string::npos);
}

TEST_CASE("a numeric check failure exits 1 and names the check") {
    // Wide packet: the average-event remainder bound exceeds 0.1.
    write_file(work / "wide.json", R"({
        "particle": {"mass": 1.0, "two_s": 0, "parity": 1},
        "gaussian": {"pbar": [0.4, 0.0, 0.2], "sigma_p": 0.5},
        "beta0": [0.0, 0.0, 0.3]
    })");
    std::string err;
    CHECK(run("boost-position --config " + (work / "wide.json").string() + " --out " +
              (work / "wide").string(),
              &err) == 1);
    CHECK(err.find("packet_width_bound") != std::string::npos);
}
