#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path p = fs::temp_directory_path() / ("psrm_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

// Runs the CLI with stdout/stderr captured to files; returns the exit code.
int run(const std::string& args) {
  const std::string cmd = std::string(PSRM_CLI_PATH) + " " + args + " > " +
                          (work_dir() / "stdout.txt").string() + " 2> " +
                          (work_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string out_file(const std::string& name) { return (work_dir() / name).string(); }

const char* kSmall = "--family q1 --n 40 --count 10";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 1") {
    CHECK(run("") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("generate --n 7 --count 2") == 1);
    CHECK(run("generate --lambda 0 --n 4 --count 2") == 1);
    CHECK(run("generate --family q3 --n 4 --count 2") == 1);
    CHECK(slurp(work_dir() / "stderr.txt").find("q3") != std::string::npos);
    CHECK(run("generate --n abc") == 1);
    CHECK(run("stats -i " + out_file("does_not_exist.csv")) == 1);
    CHECK(run("analytic --curve poisson") == 1);
    CHECK(run("sweep --lambdas=1") == 1);
    CHECK(run("--help") == 0);
    CHECK(slurp(work_dir() / "stdout.txt").find("generate") != std::string::npos);
  }

  TEST_CASE("generate is deterministic across runs and thread counts") {
    const std::string a = out_file("a.csv"), b = out_file("b.csv"), c = out_file("c.csv");
    REQUIRE(run(std::string("generate ") + kSmall + " --seed 3 --threads 1 -o " + a) == 0);
    REQUIRE(run(std::string("generate ") + kSmall + " --seed 3 --threads 3 -o " + b) == 0);
    REQUIRE(run(std::string("generate ") + kSmall + " --seed 4 -o " + c) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) != slurp(c));
    std::istringstream in(slurp(a));
    std::string header;
    std::getline(in, header);
    const auto j = nlohmann::json::parse(header);
    CHECK(j.at("tool") == "psrm");
    CHECK(j.at("config").at("family") == "q1");
    REQUIRE(run(std::string("generate ") + kSmall + " --seed 3 -o -") == 0);
    CHECK(slurp(work_dir() / "stdout.txt") == slurp(a));
  }

  TEST_CASE("stats from a file and from a fresh sample") {
    const std::string spectra = out_file("s.csv");
    REQUIRE(run(std::string("generate ") + kSmall + " -o " + spectra) == 0);
    const std::string prefix = out_file("run");
    REQUIRE(run("stats -i " + spectra + " --bins 20 -o " + prefix) == 0);
    for (const char* ext : {".nlsd.csv", ".density.csv", ".summary.json"})
      CHECK(fs::exists(prefix + ext));
    const auto summary = nlohmann::json::parse(slurp(prefix + ".summary.json"));
    CHECK(summary.at("matrices").at("used") == 10);
    std::istringstream nlsd(slurp(prefix + ".nlsd.csv"));
    std::string line;
    int rows = -2;
    while (std::getline(nlsd, line)) ++rows;
    CHECK(rows == 20);
    // Sample-defining flags contradict the recorded config.
    CHECK(run("stats -i " + spectra + " --lambda 2") == 1);
    // Same sample generated in-process gives the same summary.
    REQUIRE(run(std::string("stats ") + kSmall + " --bins 20 -o " + out_file("fresh")) == 0);
    CHECK(slurp(out_file("fresh") + ".summary.json") == slurp(prefix + ".summary.json"));
  }

  TEST_CASE("verify exit codes") {
    CHECK(run("verify --family gr2 --lambda 0.5 --mu 2 --n 20 --count 3") == 0);
    const std::string report = out_file("verify.json");
    CHECK(run("verify --family gr2 --lambda 0.5 --mu 2 --n 20 --count 3 --inject-fault -o " + report) == 3);
    CHECK(nlohmann::json::parse(slurp(report)).at("passed") == false);
    CHECK(run("verify --family gq1 --lambda 0.9 --mu -0.5 --n 20 --count 3") == 0);
  }

  TEST_CASE("analytic tables and sweeps") {
    const std::string table = out_file("curve.csv");
    REQUIRE(run("analytic --curve spacing2x2 --lambda 0.9 --points 9 -o " + table) == 0);
    std::istringstream in(slurp(table));
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 11);
    const std::string sweep = out_file("sweep.csv");
    REQUIRE(run("sweep --family gq1 --n 20 --count 4 --lambdas=-1,1 --mus=-1,1 -o " + sweep) == 0);
    std::istringstream sw(slurp(sweep));
    lines = 0;
    while (std::getline(sw, line)) ++lines;
    CHECK(lines == 6);
    fs::remove_all(work_dir());
  }
}
