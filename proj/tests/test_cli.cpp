// Runs the command-line tool as a subprocess.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hyperwalk-cli-test-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(HYPERWALK_CLI) + " " + args + " --out " + out.string() + " > " +
                          (out / "stdout.txt").string() + " 2> " + (out / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("walk exact at n=0") {
  const auto out = scratch("walk0");
  REQUIRE(run("walk exact --n 0", out) == 0);
  CHECK(slurp(out / "distribution.csv") == "word,probability_numerator,probability_denominator\ne,1,1\n");
  const auto summary = json::parse(slurp(out / "summary.json"));
  CHECK(summary["n"] == 0);
  const auto manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["command"] == "walk exact");
  CHECK(manifest.contains("version"));
  CHECK(manifest.contains("started_at"));
  CHECK(manifest.contains("finished_at"));
  CHECK(manifest["config"]["group"] == "free:2");
}

TEST_CASE("invalid measure exits with an error report") {
  const auto out = scratch("badmeasure");
  CHECK(run("walk exact --n 2 --measure weights:e=1/2,a=3/8,A=1/8", out) == 2);
  const auto err = json::parse(slurp(out / "error.json"));
  CHECK(err["error"]["subject"] == "symmetric");
  CHECK(slurp(out / "stderr.txt").find("symmetric") != std::string::npos);
}

TEST_CASE("unknown subcommand and check ids exit 2") {
  CHECK(run("bogus", scratch("bogus")) == 2);
  CHECK(run("verify not-a-check", scratch("badcheck")) == 2);
}

TEST_CASE("verify exit codes follow the verdict") {
  auto out = scratch("fourpoint");
  REQUIRE(run("verify four-point --radius 2", out) == 0);
  CHECK(json::parse(slurp(out / "report.json"))["verdict"] == "PASS");
  CHECK(slurp(out / "stdout.txt").find("four-point: PASS\n") != std::string::npos);

  out = scratch("advisory");
  REQUIRE(run("verify lemma-34delta --hypothesis-violating-input", out) == 0);
  CHECK(json::parse(slurp(out / "report.json"))["verdict"] == "ADVISORY");

  out = scratch("census");
  REQUIRE(run("verify census --radius 2", out) == 0);
  CHECK(fs::exists(out / "census.csv"));
  const auto manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["verdicts"]["census"] == "PASS");
}

TEST_CASE("experiment writes series, fit and plot data") {
  const auto out = scratch("kesten");
  const int code = run("experiment kesten --nmax 20", out);
  const auto fit = json::parse(slurp(out / "fit.json"));
  CHECK(code == (fit["verdict"] == "FAIL" ? 1 : 0));
  CHECK(slurp(out / "series.csv").rfind("n,value,ci_low,ci_high,method\n", 0) == 0);
  CHECK(fs::exists(out / "plot.dat"));
}

TEST_CASE("config file supplies defaults") {
  const auto out = scratch("config");
  {
    std::ofstream cfg(out / "run.ini");
    cfg << "[walk]\nn=1\n";
  }
  REQUIRE(run("--config " + (out / "run.ini").string() + " walk exact", out) == 0);
  CHECK(slurp(out / "distribution.csv") ==
        "word,probability_numerator,probability_denominator\ne,1,5\na,1,5\nA,1,5\nb,1,5\nB,1,5\n");
}

TEST_CASE("sampling output is independent of the thread count") {
  const auto a = scratch("t1");
  const auto b = scratch("t3");
  REQUIRE(run("walk sample --n 6 --count 100000 --seed 5 --threads 1", a) == 0);
  REQUIRE(run("walk sample --n 6 --count 100000 --seed 5 --threads 3", b) == 0);
  CHECK(slurp(a / "samples.csv") == slurp(b / "samples.csv"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
}
