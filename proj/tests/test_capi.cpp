// Exercises the shared library through its C interface only.
#include <doctest.h>

#include <cstring>
#include <string>

#include "hyperwalk/hyperwalk.h"
#include "json.hpp"

namespace {

using nlohmann::json;

std::string take(char* s) {
  std::string out = s ? s : "";
  hw_string_free(s);
  return out;
}

struct Group {
  hw_group* g = nullptr;
  explicit Group(const char* spec) { REQUIRE(hw_group_create(spec, &g) == HW_OK); }
  ~Group() { hw_group_free(g); }
};

struct Measure {
  hw_measure* m = nullptr;
  Measure(const Group& g, const char* spec) { REQUIRE(hw_measure_create(g.g, spec, &m) == HW_OK); }
  ~Measure() { hw_measure_free(m); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(hw_version()) > 0);
  CHECK(std::string(hw_status_name(HW_ERR_INVALID_MEASURE)) == "invalid-measure");
  CHECK(std::string(hw_status_name(HW_OK)) == "ok");
}

TEST_CASE("group operations") {
  Group g("free:2");
  char* s = nullptr;
  REQUIRE(hw_group_canonicalize(g.g, "abBa", &s) == HW_OK);
  CHECK(take(s) == "aa");
  REQUIRE(hw_group_multiply(g.g, "ab", "Ba", &s) == HW_OK);
  CHECK(take(s) == "aa");
  REQUIRE(hw_group_invert(g.g, "ab", &s) == HW_OK);
  CHECK(take(s) == "BA");
  REQUIRE(hw_group_power(g.g, "ab", 3, &s) == HW_OK);
  CHECK(take(s) == "ababab");
  int len = -1;
  REQUIRE(hw_group_word_length(g.g, "abA", &len) == HW_OK);
  CHECK(len == 3);
  std::uint64_t size = 0;
  REQUIRE(hw_group_ball_size(g.g, 3, &size) == HW_OK);
  CHECK(size == 53);
  CHECK(std::string(hw_last_error()).empty());

  Group p("fpc:2,3");
  REQUIRE(hw_group_invert(p.g, "t", &s) == HW_OK);
  CHECK(take(s) == "T");
}

TEST_CASE("errors carry code and subject") {
  hw_group* g = nullptr;
  CHECK(hw_group_create("free:0", &g) != HW_OK);
  CHECK(g == nullptr);
  CHECK_FALSE(std::string(hw_last_error()).empty());

  Group f2("free:2");
  char* s = nullptr;
  CHECK(hw_group_canonicalize(f2.g, "ax", &s) == HW_ERR_PARSE);
  CHECK(s == nullptr);

  hw_measure* m = nullptr;
  CHECK(hw_measure_create(f2.g, "weights:e=1/2,a=3/8,A=1/8", &m) == HW_ERR_INVALID_MEASURE);
  const auto err = json::parse(hw_last_error());
  CHECK(err["code"] == "invalid-measure");
  CHECK(err["subject"] == "symmetric");
  CHECK(m == nullptr);

  CHECK(hw_group_ball_size(f2.g, 3, nullptr) == HW_ERR_INVALID_ARGUMENT);
  Measure mu(f2, "lazy-uniform:1/5");
  char* csv = nullptr;
  char* sum = nullptr;
  CHECK(hw_walk_exact(mu.m, 12, "exact", 1000, &csv, &sum) == HW_ERR_GUARD_EXCEEDED);
  CHECK(hw_verify(f2.g, mu.m, "no-such-check", nullptr, &sum) == HW_ERR_INVALID_ARGUMENT);
  CHECK(hw_verify(f2.g, mu.m, "four-point", "{not json", &sum) == HW_ERR_PARSE);
}

TEST_CASE("exact walk") {
  Group g("free:2");
  Measure mu(g, "lazy-uniform:1/5");
  char* csv = nullptr;
  char* sum = nullptr;
  REQUIRE(hw_walk_exact(mu.m, 0, "exact", 0, &csv, &sum) == HW_OK);
  CHECK(take(csv) == "word,probability_numerator,probability_denominator\ne,1,1\n");
  const auto summary = json::parse(take(sum));
  CHECK(summary["n"] == 0);

  REQUIRE(hw_walk_exact(mu.m, 2, "exact", 0, &csv, &sum) == HW_OK);
  const auto text = take(csv);
  take(sum);
  CHECK(text.find("\ne,1,5\n") != std::string::npos);
  CHECK(text.find("\nab,1,25\n") != std::string::npos);
  CHECK(text.find("\naa,1,25\n") != std::string::npos);
}

TEST_CASE("sampled walk is reproducible") {
  Group g("free:2");
  Measure mu(g, "lazy-uniform:1/5");
  char* a = nullptr;
  char* b = nullptr;
  char* s = nullptr;
  REQUIRE(hw_walk_sample(mu.m, 5, 10000, 4, 1, &a, &s) == HW_OK);
  take(s);
  REQUIRE(hw_walk_sample(mu.m, 5, 10000, 4, 2, &b, &s) == HW_OK);
  take(s);
  CHECK(take(a) == take(b));
}

TEST_CASE("checks through the C interface") {
  char* ids = nullptr;
  REQUIRE(hw_check_ids(&ids) == HW_OK);
  const auto list = json::parse(take(ids));
  CHECK(list.size() >= 11);

  Group g("free:2");
  char* report = nullptr;
  REQUIRE(hw_verify(g.g, nullptr, "four-point", "{\"radius\": 2}", &report) == HW_OK);
  const auto r = json::parse(take(report));
  CHECK(r["check"] == "four-point");
  CHECK(r["verdict"] == "PASS");

  Measure mu(g, "lazy-uniform:1/5");
  REQUIRE(hw_verify(g.g, mu.m, "symmetry", "{\"kmax\": 3}", &report) == HW_OK);
  CHECK(json::parse(take(report))["verdict"] == "PASS");
}

TEST_CASE("experiment through the C interface") {
  Group g("free:2");
  Measure mu(g, "lazy-uniform:1/5");
  char* series = nullptr;
  char* summary = nullptr;
  char* plot = nullptr;
  REQUIRE(hw_experiment(mu.m, "kesten", "{\"nmax\": 20}", &series, &summary, &plot) == HW_OK);
  CHECK(take(series).rfind("n,value,ci_low,ci_high,method\n2,", 0) == 0);
  const auto s = json::parse(take(summary));
  CHECK(s.contains("verdict"));
  CHECK(take(plot).rfind("# n", 0) == 0);
  CHECK(hw_experiment(mu.m, "nonsense", nullptr, &series, &summary, &plot) == HW_ERR_INVALID_ARGUMENT);
}
