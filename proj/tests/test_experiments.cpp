#include <doctest.h>

#include <cmath>

#include "hyperwalk/error.hpp"
#include "hyperwalk/experiments.hpp"
#include "support.hpp"

using namespace hyperwalk;

namespace {

StepMeasure lazy5(const ModelPtr& m) { return StepMeasure::lazy_uniform(m, Rational(1, 5)); }

ExperimentSeries synthetic(double rho, double c, double k, int lo, int hi) {
  ExperimentSeries s;
  for (int n = lo; n <= hi; ++n) s.add_exact(n, k * std::pow(n, c) * std::pow(rho, n));
  return s;
}

}  // namespace

TEST_CASE("rate fit recovers synthetic parameters") {
  auto f = fit_rate(synthetic(0.9, 2.0, 1.0, 1, 40), 5, 40);
  CHECK(f.rho_hat == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(f.c_hat == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(f.intercept == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(f.residual < 1e-8);
  CHECK(f.points == 36);
  CHECK(f.window_low == 5);
  CHECK(f.window_high == 40);

  f = fit_rate(synthetic(1.0, 0.0, 3.0, 1, 20), 1, 20);
  CHECK(f.rho_hat == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(f.c_hat) < 1e-9);

  f = fit_rate(synthetic(0.7, 0.0, 0.5, 1, 20), 1, 20, 0);
  CHECK(f.rho_hat == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(f.c_hat == 0.0);

  ExperimentSeries bad;
  bad.add_exact(1, 0.5);
  bad.add_exact(2, 0.0);
  CHECK_THROWS_AS(fit_rate(bad, 1, 2), Error);
}

TEST_CASE("A_star and plot data") {
  const auto s = synthetic(0.5, 3.0, 1.0, 1, 10);
  CHECK(A_star(s, 0.5) == doctest::Approx(3.0).epsilon(1e-9));
  const auto plot = plot_data(s, 0.5);
  CHECK(plot.rfind("# n log(q_n/rho^n)\n1 0\n", 0) == 0);
}

TEST_CASE("series CSV") {
  ExperimentSeries s;
  s.add_exact(1, 0.25);
  s.points.push_back({2, 0.125, 0.1, 0.15, "monte-carlo"});
  CHECK(s.to_csv() == "n,value,ci_low,ci_high,method\n1,0.25,0.25,0.25,exact\n2,0.125,0.10000000000000001,0.14999999999999999,monte-carlo\n");
  CHECK(s.at(2)->method == "monte-carlo");
  CHECK(s.at(3) == nullptr);
}

TEST_CASE("Kesten experiment") {
  auto f2 = make_model("free:2");
  KestenConfig cfg;
  cfg.half_max = 10;
  const auto r = run_kesten(lazy5(f2), cfg);
  REQUIRE(r.series.points.size() == 10);
  const auto ref = oracle::free_laws(oracle::lazy_uniform(2, oracle::Q(1, 5)), 10);
  for (int m = 1; m <= 5; ++m) {
    CHECK(r.exact_returns[static_cast<std::size_t>(m - 1)] == ref[static_cast<std::size_t>(2 * m)].at(""));
    CHECK(r.series.at(2 * m)->value ==
          doctest::Approx(std::pow(ref[static_cast<std::size_t>(2 * m)].at("").get_d(), 1.0 / (2 * m))));
  }
  CHECK(r.below_closed_form);
  CHECK(r.doubling_monotone);
  REQUIRE(r.closed_form);
  CHECK(r.closed_form->value == doctest::Approx(0.8928203230275509));
  // a 20-step horizon stays well below 0.80
  CHECK_FALSE(r.final_above_threshold);
  CHECK(r.verdict == Verdict::Fail);

  // on Z the return probabilities decay only polynomially
  cfg.half_max = 40;
  const auto z = run_kesten(StepMeasure::lazy_uniform(make_model("free:1"), Rational(1, 3)), cfg);
  CHECK(z.final_value > 0.95);
  CHECK(z.verdict == Verdict::Pass);
  CHECK(z.fit.rho_hat == doctest::Approx(1.0).epsilon(0.01));
  CHECK(z.fit.c_hat == doctest::Approx(-0.5).epsilon(0.05));
}

TEST_CASE("proper-power rate experiment: exact part matches brute force") {
  auto f2 = make_model("free:2");
  Theorem1Config cfg;
  cfg.exact_max = 6;
  cfg.mc_max = 8;
  cfg.samples = 200'000;
  cfg.fit_low = 2;
  const auto r = run_theorem1(lazy5(f2), cfg);
  const auto ref = oracle::free_laws(oracle::lazy_uniform(2, oracle::Q(1, 5)), 6);
  const oracle::PowerOracle powers(2, 6);
  for (int n = 0; n <= 6; ++n) {
    oracle::Q q = 0;
    for (const auto& [w, p] : ref[static_cast<std::size_t>(n)]) {
      if (powers.is_power(w)) q += p;
    }
    CHECK(r.exact_q[static_cast<std::size_t>(n)] == q);
    CHECK(r.exact_q[static_cast<std::size_t>(n)] >= ref[static_cast<std::size_t>(n)].at(""));
  }
  CHECK(r.exact_q[0] == 1);
  CHECK(r.contains_returns);
  CHECK(r.bounds_hold);
  CHECK(r.overlap_consistent);
  CHECK(r.rho.method == RhoMethod::ClosedForm);
  CHECK(r.series.points.size() == 9);  // n = 0..8
  CHECK(r.series.at(6)->method == "exact");
  CHECK(r.series.at(7)->method == "monte-carlo");

  // same seed, different thread count
  cfg.threads = 2;
  const auto r2 = run_theorem1(lazy5(f2), cfg);
  CHECK(r2.series.to_csv() == r.series.to_csv());
}

TEST_CASE("proper-power rate experiment on Z") {
  Theorem1Config cfg;
  cfg.exact_max = 8;
  cfg.mc_max = 10;
  cfg.samples = 100'000;
  cfg.fit_low = 2;
  const auto r = run_theorem1(StepMeasure::lazy_uniform(make_model("free:1"), Rational(1, 3)), cfg);
  // in Z, x is a proper power iff x = e or |x| >= 2; so q_n = 1 - P(|g_n| = 1)
  const auto ref = oracle::free_laws(oracle::lazy_uniform(1, oracle::Q(1, 3)), 8);
  for (int n = 0; n <= 8; ++n) {
    oracle::Q one = 0;
    for (const auto& [w, p] : ref[static_cast<std::size_t>(n)]) {
      if (w.size() == 1) one += p;
    }
    CHECK(r.exact_q[static_cast<std::size_t>(n)] == 1 - one);
  }
  CHECK(r.rho.value == 1.0);
}

TEST_CASE("proper power hits are deterministic") {
  auto f2 = make_model("free:2");
  const PowerDetector det(f2, 1.0);
  const auto a = proper_power_hits(lazy5(f2), 6, 50'000, 3, 1, det);
  const auto b = proper_power_hits(lazy5(f2), 6, 50'000, 3, 4, det);
  CHECK(a == b);
  REQUIRE(a.size() == 7);
  CHECK(a[0] == 50'000);
}

TEST_CASE("conjugacy class bound") {
  auto f2 = make_model("free:2");
  const auto mu = lazy5(f2);
  const auto rho = rho_closed_form_free(mu);
  ConjClassConfig cfg;
  cfg.n_max = 8;
  const auto ref = oracle::free_laws(oracle::lazy_uniform(2, oracle::Q(1, 5)), 8);
  for (const char* cls : {"e", "a", "ab", "aB", "aab"}) {
    const auto r = run_conjclass_bound(mu, f2->parse(cls), cfg, rho);
    const auto key = oracle::conj_key(oracle::reduce(cls));
    for (int n = 0; n <= 8; ++n) {
      oracle::Q p = 0;
      for (const auto& [w, q] : ref[static_cast<std::size_t>(n)]) {
        if (oracle::conj_key(w) == key) p += q;
      }
      CHECK(r.exact[static_cast<std::size_t>(n)] == p);
      // a class is out of reach until n >= |C|
      if (n < static_cast<int>(key.size())) CHECK(r.exact[static_cast<std::size_t>(n)] == 0);
    }
    CHECK(r.class_length == static_cast<int>(key.size()));
    CHECK(r.verdict == Verdict::Pass);
  }
  const auto sweep = run_conjclass_sweep(mu, 2, cfg, rho);
  // classes of length <= 2 in F2: e; a, A, b, B; aa, AA, bb, BB, ab, aB, Ab, AB
  CHECK(sweep.size() == 13);
  CHECK(conjugacy_classes_up_to(*f2, 2).size() == 13);
}

TEST_CASE("symmetry identity") {
  auto f2 = make_model("free:2");
  const auto mu = lazy5(f2);
  const WalkLaws laws(mu, 6, Arithmetic::Exact);
  const auto ref = oracle::free_laws(oracle::lazy_uniform(2, oracle::Q(1, 5)), 6);
  for (const char* cls : {"e", "ab", "a", "aab"}) {
    for (int k2 = 0; k2 <= 6; ++k2) {
      for (int k4 = 0; k4 <= 6; ++k4) {
        const auto r = verify_symmetry_identity(laws, f2->parse(cls), k2, k4);
        REQUIRE(r.equal());
        const auto key = oracle::conj_key(oracle::reduce(cls));
        oracle::Q lhs = 0;
        for (const auto& [w, p] : ref[static_cast<std::size_t>(k2)]) {
          if (oracle::conj_key(w) != key) continue;
          const auto& l4 = ref[static_cast<std::size_t>(k4)];
          if (auto it = l4.find(w); it != l4.end()) lhs += p * it->second;
        }
        CHECK(r.lhs == lhs);
      }
    }
  }
  const auto zero = verify_symmetry_identity(laws, f2->identity(), 0, 0);
  CHECK(zero.lhs == 1);
  CHECK(zero.rhs == 1);

  const auto control = asymmetric_control_measure(f2);
  const auto bad = verify_symmetry_identity(control, f2->parse("a"), 1, 1);
  CHECK_FALSE(bad.equal());
  CHECK(bad.lhs == Rational(9, 100));
  CHECK(bad.rhs == Rational(3, 100));
  CHECK_THROWS_AS(verify_symmetry_identity(laws, f2->identity(), 7, 1), Error);
}
