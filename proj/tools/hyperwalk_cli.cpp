// hyperwalk command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "hyperwalk/hyperwalk.h"
#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct ApiError {
  Json detail;
};

void check(hw_status s) {
  if (s == HW_OK) return;
  Json j = Json::parse(hw_last_error(), nullptr, false);
  if (j.is_discarded()) j = {{"code", hw_status_name(s)}, {"message", hw_last_error()}};
  throw ApiError{j};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  hw_string_free(s);
  return out;
}

struct GroupHandle {
  hw_group* g = nullptr;
  ~GroupHandle() { hw_group_free(g); }
};
struct MeasureHandle {
  hw_measure* m = nullptr;
  ~MeasureHandle() { hw_measure_free(m); }
};

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

enum class Kind { Int, UInt, Double, Str, IntList, DoubleList, StrList };

// Options forwarded verbatim to the library, keyed by their JSON name.
struct Forwarded {
  const char* flag;
  const char* key;
  Kind kind;
  const char* help;
};

const std::vector<Forwarded> kForwarded = {
    {"--nmax", "nmax", Kind::Int, "largest number of steps (walks, sweeps, experiments)"},
    {"--radius", "radius", Kind::Int, "ball radius"},
    {"--outer-radius", "outer_radius", Kind::Int, "outer ball radius"},
    {"--kmax", "kmax", Kind::Int, "largest defect K or step count k"},
    {"--delta", "delta", Kind::Double, "hyperbolicity constant (overrides the backend default)"},
    {"--samples", "samples", Kind::UInt, "number of Monte Carlo samples"},
    {"--exact-max", "exact_max", Kind::Int, "largest n computed exactly"},
    {"--A", "A", Kind::Double, "polynomial exponent in n^A rho^n"},
    {"--tolerance", "tolerance", Kind::Double, "tolerance on the fitted rate"},
    {"--threshold", "threshold", Kind::Double, "lower threshold on the final root estimate"},
    {"--fit-low", "fit_low", Kind::Int, "first n used in the rate fit"},
    {"--class", "class", Kind::Str, "conjugacy class given by a word"},
    {"--classes", "classes", Kind::StrList, "comma separated class words"},
    {"--max-class-length", "max_class_length", Kind::Int, "largest class length in a sweep"},
    {"--min-length", "min_length", Kind::Int, "smallest sampled word length"},
    {"--max-length", "max_length", Kind::Int, "largest sampled word length"},
    {"--g-radius", "g_radius", Kind::Int, "radius for conjugators g"},
    {"--exponents", "exponents", Kind::IntList, "comma separated exponents"},
    {"--alphas", "alphas", Kind::DoubleList, "comma separated alpha values"},
    {"--dmax", "dmax", Kind::Int, "largest power d"},
    {"--rayleigh-radius", "rayleigh_radius", Kind::Int, "ball radius for the Rayleigh estimate of rho"},
    {"--base", "h", Kind::Str, "word h in a power decomposition"},
    {"--h1", "h1", Kind::Str, "word h1"},
    {"--conjugator", "g", Kind::Str, "conjugator g in a power decomposition"},
    {"--exponent", "d", Kind::Int, "exponent d in a power decomposition"},
    {"--a0", "a0", Kind::Int, "coupling window a0"},
    {"--steps", "n", Kind::Int, "walk length used by the check"},
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

Json convert(const Forwarded& f, const std::string& v) {
  try {
    switch (f.kind) {
      case Kind::Int: return std::stoi(v);
      case Kind::UInt: return static_cast<std::uint64_t>(std::stod(v));
      case Kind::Double: return std::stod(v);
      case Kind::Str: return v;
      case Kind::StrList: return split(v);
      case Kind::IntList: {
        Json a = Json::array();
        for (const auto& x : split(v)) a.push_back(std::stoi(x));
        return a;
      }
      case Kind::DoubleList: {
        Json a = Json::array();
        for (const auto& x : split(v)) a.push_back(std::stod(x));
        return a;
      }
    }
  } catch (const std::exception&) {
  }
  throw ApiError{{{"code", "parse"}, {"message", std::string("bad value for ") + f.flag + ": " + v}, {"subject", f.key}}};
}

struct Settings {
  std::string group = "free:2";
  std::string measure = "lazy-uniform:1/5";
  std::string out;
  std::string mode = "exact";
  std::uint64_t seed = 1;
  int threads = 1;
  int n = 0;
  std::uint64_t count = 100000;
  std::uint64_t guard = 0;
  bool violating = false;
  bool no_control = false;
  std::string action;  // walk exact|sample, verify id, experiment kind
  std::map<std::string, std::string> forwarded;
};

void add_forwarded(CLI::App* cmd, Settings& s) {
  for (const auto& f : kForwarded) cmd->add_option(f.flag, s.forwarded[f.key], f.help);
}

Json forwarded_options(CLI::App* cmd, const Settings& s) {
  Json o = Json::object();
  for (const auto& f : kForwarded) {
    if (cmd->count(f.flag) > 0) o[f.key] = convert(f, s.forwarded.at(f.key));
  }
  return o;
}

class Run {
 public:
  Run(std::string command, const Settings& s) : command_(std::move(command)), started_(utc_now()) {
    dir_ = s.out;
    if (dir_.empty()) {
      const char* env = std::getenv("HYPERWALK_OUT");
      dir_ = env && *env ? env : "hyperwalk-out";
    }
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& body) {
    std::ofstream f(fs::path(dir_) / name, std::ios::binary);
    f << body;
    if (!body.empty() && body.back() != '\n') f << '\n';
    if (!f) throw ApiError{{{"code", "io"}, {"message", "cannot write " + name}, {"subject", "out"}}};
    files_.push_back(name);
    std::cout << (fs::path(dir_) / name).string() << '\n';
  }

  void verdict(const std::string& what, const std::string& v) { verdicts_[what] = v; }

  void finish(const Json& config) {
    Json m;
    m["version"] = hw_version();
    m["command"] = command_;
    m["config"] = config;
    m["seed"] = config.value("seed", Json(nullptr));
    m["started_at"] = started_;
    m["finished_at"] = utc_now();
    m["files"] = files_;
    m["verdicts"] = verdicts_;
    files_.push_back("manifest.json");
    m["files"] = files_;
    std::ofstream f(fs::path(dir_) / "manifest.json", std::ios::binary);
    f << m.dump(2) << '\n';
  }

  const std::string& dir() const { return dir_; }

 private:
  std::string command_;
  std::string started_;
  std::string dir_;
  std::vector<std::string> files_;
  Json verdicts_ = Json::object();
};

int exit_for(const std::string& verdict) { return verdict == "FAIL" ? 1 : 0; }

int cmd_walk(const Settings& s, Json config) {
  GroupHandle g;
  check(hw_group_create(s.group.c_str(), &g.g));
  MeasureHandle m;
  check(hw_measure_create(g.g, s.measure.c_str(), &m.m));
  Run run("walk " + s.action, s);
  char* csv = nullptr;
  char* summary = nullptr;
  if (s.action == "exact") {
    config["mode"] = s.mode;
    check(hw_walk_exact(m.m, s.n, s.mode.c_str(), s.guard, &csv, &summary));
  } else {
    config["count"] = s.count;
    check(hw_walk_sample(m.m, s.n, s.count, s.seed, s.threads, &csv, &summary));
  }
  config["n"] = s.n;
  run.write(s.action == "exact" ? "distribution.csv" : "samples.csv", take(csv));
  run.write("summary.json", take(summary));
  run.finish(config);
  return 0;
}

int cmd_verify(const Settings& s, Json config, Json options) {
  GroupHandle g;
  check(hw_group_create(s.group.c_str(), &g.g));
  MeasureHandle m;
  check(hw_measure_create(g.g, s.measure.c_str(), &m.m));
  options["seed"] = s.seed;
  if (s.violating) options["hypothesis_violating_input"] = true;
  if (s.no_control) options["negative_control"] = false;
  config["check"] = s.action;
  config["options"] = options;
  Run run("verify " + s.action, s);
  char* out = nullptr;
  check(hw_verify(g.g, m.m, s.action.c_str(), options.dump().c_str(), &out));
  Json report = Json::parse(take(out));
  if (report.contains("artifacts")) {
    Json names = Json::array();
    for (auto it = report["artifacts"].begin(); it != report["artifacts"].end(); ++it) {
      run.write(it.key(), it.value().get<std::string>());
      names.push_back(it.key());
    }
    report["artifacts"] = names;
  }
  const std::string verdict = report.value("verdict", "FAIL");
  run.write("report.json", report.dump(2));
  run.verdict(s.action, verdict);
  run.finish(config);
  std::cout << s.action << ": " << verdict << '\n';
  return exit_for(verdict);
}

int cmd_experiment(const Settings& s, Json config, Json options) {
  GroupHandle g;
  check(hw_group_create(s.group.c_str(), &g.g));
  MeasureHandle m;
  check(hw_measure_create(g.g, s.measure.c_str(), &m.m));
  options["seed"] = s.seed;
  options["threads"] = s.threads;
  config["experiment"] = s.action;
  config["options"] = options;
  Run run("experiment " + s.action, s);
  char* series = nullptr;
  char* summary = nullptr;
  char* plot = nullptr;
  check(hw_experiment(m.m, s.action.c_str(), options.dump().c_str(), &series, &summary, &plot));
  Json fit = Json::parse(take(summary));
  // the thread count never changes results, so keep it out of the body
  if (fit.contains("config")) fit["config"].erase("threads");
  const std::string verdict = fit.value("verdict", "FAIL");
  run.write("series.csv", take(series));
  run.write("fit.json", fit.dump(2));
  run.write("plot.dat", take(plot));
  run.verdict(s.action, verdict);
  run.finish(config);
  std::cout << s.action << ": " << verdict << '\n';
  return exit_for(verdict);
}

void write_error(const Settings& s, const Json& detail) {
  Json e{{"error", detail}};
  std::cerr << e.dump(2) << '\n';
  try {
    std::string dir = s.out;
    if (dir.empty()) {
      const char* env = std::getenv("HYPERWALK_OUT");
      dir = env && *env ? env : "hyperwalk-out";
    }
    fs::create_directories(dir);
    std::ofstream(fs::path(dir) / "error.json") << e.dump(2) << '\n';
  } catch (const std::exception&) {
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walks on hyperbolic groups: exact laws, sampling, checks and experiments"};
  app.set_version_flag("--version", std::string(hw_version()));
  app.set_config("--config", "", "INI file; [walk], [verify] and [experiment] sections hold subcommand options");
  app.require_subcommand(1);
  Settings s;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--group", s.group, "free:K, fpc:2,3, fpc:2,3+1, surface:G:R or sc:<file>:R")
        ->capture_default_str();
    cmd->add_option("--measure", s.measure, "lazy-uniform:p/q or weights:word=p/q,...")->capture_default_str();
    cmd->add_option("--out", s.out, "output directory (default $HYPERWALK_OUT or ./hyperwalk-out)");
    cmd->add_option("--seed", s.seed, "random seed")->capture_default_str();
    cmd->add_option("--threads", s.threads, "worker threads; never changes results")->capture_default_str();
  };

  auto* walk = app.add_subcommand("walk", "exact law or sampled endpoints of g_n");
  walk->add_option("action", s.action, "exact or sample")->required()->check(CLI::IsMember({"exact", "sample"}));
  common(walk);
  walk->add_option("--n", s.n, "number of steps")->capture_default_str();
  walk->add_option("--mode", s.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
  walk->add_option("--count", s.count, "number of sampled paths")->capture_default_str();
  walk->add_option("--guard", s.guard, "support size guard (0 = default)");

  std::string ids_text;
  {
    char* ids = nullptr;
    if (hw_check_ids(&ids) == HW_OK) ids_text = take(ids);
  }
  std::vector<std::string> ids;
  if (!ids_text.empty()) ids = Json::parse(ids_text).get<std::vector<std::string>>();

  auto* verify = app.add_subcommand("verify", "run one named check and write its report");
  verify->add_option("id", s.action, "check id")->required()->check(CLI::IsMember(ids));
  common(verify);
  add_forwarded(verify, s);
  verify->add_flag("--hypothesis-violating-input", s.violating, "run the power decomposition on h=ab, d=2, g=e");
  verify->add_flag("--no-negative-control", s.no_control, "skip the asymmetric control measure");

  auto* experiment = app.add_subcommand("experiment", "rate experiments with series, fit and plot data");
  experiment->add_option("kind", s.action, "kesten, theorem1 or conjclass")
      ->required()
      ->check(CLI::IsMember({"kesten", "theorem1", "conjclass"}));
  common(experiment);
  add_forwarded(experiment, s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    write_error(s, {{"code", "parse"}, {"message", e.what()}, {"subject", "arguments"}});
    return 2;
  }

  Json config{{"group", s.group}, {"measure", s.measure}, {"seed", s.seed}};
  try {
    if (walk->parsed()) return cmd_walk(s, config);
    if (verify->parsed()) return cmd_verify(s, config, forwarded_options(verify, s));
    return cmd_experiment(s, config, forwarded_options(experiment, s));
  } catch (const ApiError& e) {
    write_error(s, e.detail);
  } catch (const std::exception& e) {
    write_error(s, {{"code", "internal"}, {"message", e.what()}, {"subject", ""}});
  }
  return 2;
}
