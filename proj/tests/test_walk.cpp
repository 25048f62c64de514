#include <doctest.h>

#include <cmath>

#include "hyperwalk/coupling.hpp"
#include "hyperwalk/distribution.hpp"
#include "hyperwalk/error.hpp"
#include "hyperwalk/measure.hpp"
#include "hyperwalk/sampling.hpp"
#include "hyperwalk/spectral.hpp"
#include "support.hpp"

using namespace hyperwalk;

namespace {

ModelPtr F2() { return make_model("free:2"); }

StepMeasure lazy(const ModelPtr& m, int p = 1, int q = 5) { return StepMeasure::lazy_uniform(m, Rational(p, q)); }

Atom atom(const ModelPtr& m, const char* w, int p, int q) { return {m->parse(w), Rational(p, q)}; }

MeasureViolation violation_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::InvalidMeasure);
    for (auto v : {MeasureViolation::NonPositiveWeight, MeasureViolation::DuplicateAtom, MeasureViolation::TotalNotOne,
                   MeasureViolation::NonSymmetric, MeasureViolation::ZeroIdentityMass,
                   MeasureViolation::NonGenerating}) {
      if (e.subject() == violation_name(v)) return v;
    }
    FAIL("unexpected subject " << e.subject());
  }
  FAIL("no error raised");
  return MeasureViolation::NonPositiveWeight;
}

}  // namespace

TEST_CASE("measure validation") {
  auto m = F2();
  CHECK_NOTHROW(StepMeasure::validate(m, {atom(m, "e", 1, 5), atom(m, "a", 1, 5), atom(m, "A", 1, 5),
                                          atom(m, "b", 1, 5), atom(m, "B", 1, 5)}));
  CHECK(violation_of([&] {
          StepMeasure::validate(m, {atom(m, "a", 1, 2), atom(m, "A", 1, 4), atom(m, "e", 1, 4)});
        }) == MeasureViolation::NonSymmetric);
  CHECK(violation_of([&] {
          StepMeasure::validate(m, {atom(m, "e", 1, 3), atom(m, "a", 1, 3), atom(m, "A", 1, 3)});
        }) == MeasureViolation::NonGenerating);
  CHECK(violation_of([&] {
          StepMeasure::validate(m, {atom(m, "a", 1, 4), atom(m, "A", 1, 4), atom(m, "b", 1, 4), atom(m, "B", 1, 4)});
        }) == MeasureViolation::ZeroIdentityMass);
  CHECK(violation_of([&] {
          StepMeasure::validate(m, {atom(m, "e", 1, 5), atom(m, "a", 1, 5), atom(m, "A", 1, 5), atom(m, "b", 1, 5),
                                    atom(m, "B", 1, 10)});
        }) != MeasureViolation::NonPositiveWeight);
  CHECK(violation_of([&] {
          StepMeasure::validate(m, {atom(m, "e", 1, 4), atom(m, "a", 1, 4), atom(m, "A", 1, 4), atom(m, "b", 1, 4),
                                    atom(m, "B", 1, 4)});
        }) == MeasureViolation::TotalNotOne);
}

TEST_CASE("measure parsing and accessors") {
  auto m = F2();
  const auto mu = StepMeasure::parse(m, "lazy-uniform:0.2");
  CHECK(mu.free_lazy_uniform_alpha() == Rational(1, 5));
  CHECK(mu.min_weight() == Rational(1, 5));
  CHECK(mu.denominator() == 5);
  CHECK(mu.is_symmetric());
  CHECK(mu.weight_of(m->parse("b")) == Rational(1, 5));
  CHECK(mu.weight_of(m->parse("ab")) == 0);
  const auto w = StepMeasure::parse(m, "weights:e=1/2,a=1/8,A=1/8,b=1/8,B=1/8");
  CHECK(w.min_weight() == Rational(1, 8));
  CHECK(w.free_lazy_uniform_alpha() == Rational(1, 2));
  const auto fpc = lazy(make_model("fpc:2,3"), 1, 4);
  // s is an involution, so it has a single edge letter
  CHECK(fpc.atoms().size() == 4);
  CHECK_FALSE(fpc.free_lazy_uniform_alpha());
  CHECK_THROWS_AS(StepMeasure::parse(m, "gaussian:1"), Error);
}

TEST_CASE("n-step laws match brute-force convolution") {
  auto m = F2();
  const auto mu = lazy(m);
  const auto ref = oracle::free_laws(oracle::lazy_uniform(2, oracle::Q(1, 5)), 6);
  const WalkLaws laws(mu, 6, Arithmetic::Exact);
  for (int n = 0; n <= 6; ++n) {
    const auto& law = laws.law(n);
    CHECK(law.support_size() == ref[static_cast<std::size_t>(n)].size());
    for (const auto& [w, p] : ref[static_cast<std::size_t>(n)]) CHECK(law.probability(m->parse(w)) == p);
    CHECK(law.total_mass() == 1);
  }
  CHECK(laws.law(0).probability(m->identity()) == 1);
  for (const auto& a : mu.atoms()) CHECK(laws.law(1).probability(a.element) == a.weight);
  CHECK(laws.law(2).probability(m->identity()) == Rational(1, 5));
}

TEST_CASE("non-lazy-uniform law against brute force") {
  auto m = F2();
  const auto mu = StepMeasure::parse(m, "weights:e=1/3,a=1/4,A=1/4,b=1/12,B=1/12");
  const std::map<std::string, oracle::Q> ref_mu{{"", oracle::Q(1, 3)},
                                                {"a", oracle::Q(1, 4)},
                                                {"A", oracle::Q(1, 4)},
                                                {"b", oracle::Q(1, 12)},
                                                {"B", oracle::Q(1, 12)}};
  const auto ref = oracle::free_laws(ref_mu, 5);
  const auto law = n_step_distribution(mu, 5, Arithmetic::Exact);
  for (const auto& [w, p] : ref[5]) CHECK(law.probability(m->parse(w)) == p);
}

TEST_CASE("float mode tracks exact mode") {
  const auto mu = lazy(F2());
  const auto exact = n_step_distribution(mu, 8, Arithmetic::Exact);
  const auto fl = n_step_distribution(mu, 8, Arithmetic::Float);
  CHECK(std::abs(fl.total_mass_double() - 1.0) < 1e-12);
  for (std::size_t i = 0; i < exact.extent(); ++i) {
    CHECK(std::abs(fl.probability_double(i) - exact.probability(i).get_d()) < 1e-15);
  }
}

TEST_CASE("law symmetry, mass and supermultiplicativity") {
  for (const char* spec : {"free:2", "fpc:2,3", "fpc:2,3+1"}) {
    auto m = make_model(spec);
    const auto mu = lazy(m, 1, 4);
    const WalkLaws laws(mu, 10, Arithmetic::Exact);
    for (int n = 0; n <= 10; ++n) {
      const auto& law = laws.law(n);
      CHECK(law.total_mass() == 1);
      for (std::size_t i = 0; i < law.extent(); ++i) {
        const auto& x = law.ball().element(i);
        REQUIRE(law.probability(i) == law.probability(m->invert(x)));
      }
    }
    const auto r = return_probabilities(mu, 10);
    for (int a = 1; a <= 10; ++a) {
      for (int b = 1; a + b <= 10; ++b) {
        CHECK(r[static_cast<std::size_t>(a + b - 1)] >=
              r[static_cast<std::size_t>(a - 1)] * r[static_cast<std::size_t>(b - 1)]);
      }
    }
  }
}

TEST_CASE("distribution CSV") {
  auto m = F2();
  const auto d0 = n_step_distribution(lazy(m), 0, Arithmetic::Exact);
  CHECK(d0.to_csv() == "word,probability_numerator,probability_denominator\ne,1,1\n");
  const auto d1 = n_step_distribution(lazy(m), 1, Arithmetic::Exact);
  CHECK(d1.to_csv() ==
        "word,probability_numerator,probability_denominator\ne,1,5\na,1,5\nA,1,5\nb,1,5\nB,1,5\n");
  const auto f1 = n_step_distribution(lazy(m, 1, 2), 1, Arithmetic::Float);
  CHECK(f1.to_csv().rfind("word,probability\ne,0.5\na,0.125\n", 0) == 0);
}

TEST_CASE("support guard") {
  CHECK_THROWS_AS(n_step_distribution(lazy(F2()), 12, Arithmetic::Exact, 10000), Error);
  try {
    n_step_distribution(lazy(F2()), 12, Arithmetic::Exact, 10000);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GuardExceeded);
  }
}

TEST_CASE("point probabilities beyond the stored laws") {
  auto m = F2();
  const auto mu = lazy(m);
  const PointProbabilities probs(mu, 4);
  const WalkLaws laws(mu, 8, Arithmetic::Exact);
  CHECK(probs.reach() == 8);
  for (const char* w : {"e", "a", "ab", "abAB", "aaaa", "abba", "aabb", "bbbbbbbb"}) {
    for (int n = 0; n <= 8; ++n) CHECK(probs.probability(n, m->parse(w)) == laws.law(n).probability(m->parse(w)));
  }
  CHECK_THROWS_AS(probs.probability(9, m->identity()), Error);
}

TEST_CASE("radial chain matches convolution") {
  const auto radial = radial_laws(2, Rational(1, 5), 8);
  const auto ref = oracle::free_laws(oracle::lazy_uniform(2, oracle::Q(1, 5)), 8);
  for (int n = 0; n <= 8; ++n) {
    std::vector<oracle::Q> by_len(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [w, p] : ref[static_cast<std::size_t>(n)]) by_len[w.size()] += p;
    for (int r = 0; r <= n; ++r) CHECK(radial[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)] == by_len[static_cast<std::size_t>(r)]);
  }
  const auto returns = return_probabilities(lazy(F2()), 4);
  for (int k = 1; k <= 4; ++k) CHECK(returns[static_cast<std::size_t>(k - 1)] == ref[static_cast<std::size_t>(2 * k)].at(""));
}

TEST_CASE("return probabilities by convolution for other measures") {
  auto m = make_model("fpc:2,3");
  const auto mu = lazy(m, 1, 4);
  const auto r = return_probabilities(mu, 4);
  const WalkLaws laws(mu, 8, Arithmetic::Exact);
  for (int k = 1; k <= 4; ++k) CHECK(r[static_cast<std::size_t>(k - 1)] == laws.law(2 * k).probability(m->identity()));
}

TEST_CASE("closed-form spectral radius") {
  CHECK(rho_closed_form_free(2, 0.0).value == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
  CHECK(rho_closed_form_free(2, 0.2).value == doctest::Approx(0.2 + 0.8 * std::sqrt(3.0) / 2).epsilon(1e-15));
  CHECK(rho_closed_form_free(2, 0.2).value == doctest::Approx(0.892820).epsilon(1e-6));
  CHECK(rho_closed_form_free(1, 0.3).value == 1.0);
  CHECK(rho_closed_form_free(lazy(F2())).method == RhoMethod::ClosedForm);
  CHECK_FALSE(rho_closed_form_free(lazy(F2())).is_lower_bound);
  CHECK_THROWS_AS(rho_closed_form_free(lazy(make_model("fpc:2,3"), 1, 4)), Error);
}

TEST_CASE("lower bounds for rho") {
  const auto mu = lazy(F2());
  const double rho = rho_closed_form_free(mu).value;
  const auto ret = rho_from_returns(mu, 20);
  CHECK(ret.is_lower_bound);
  CHECK(ret.value <= rho);
  CHECK(ret.value > 0.79);
  const auto r = return_probabilities(mu, 20);
  for (int k = 1; 2 * k <= 20; ++k) {
    const double a = std::pow(r[static_cast<std::size_t>(k - 1)].get_d(), 1.0 / (2 * k));
    const double b = std::pow(r[static_cast<std::size_t>(2 * k - 1)].get_d(), 1.0 / (4 * k));
    CHECK(b >= a);
  }
  // Z is amenable
  const auto z = rho_from_returns(lazy(make_model("free:1"), 1, 3), 40);
  CHECK(z.value > 0.95);

  const auto r0 = rho_rayleigh_ball(mu, 0);
  CHECK(r0.value == doctest::Approx(0.2));
  double prev = r0.value;
  for (int R = 1; R <= 5; ++R) {
    const auto e = rho_rayleigh_ball(mu, R);
    CHECK(e.is_lower_bound);
    CHECK(e.value >= prev - 1e-12);
    CHECK(e.value <= rho);
    prev = e.value;
  }
}

TEST_CASE("pointwise bound") {
  auto m = F2();
  const auto mu = lazy(m);
  const auto rho = rho_closed_form_free(mu);
  const WalkLaws laws(mu, 12, Arithmetic::Exact);
  for (int n = 0; n <= 12; ++n) {
    const auto rep = check_pointwise_bound(laws.law(n), rho);
    CHECK(rep.holds());
    CHECK(rep.warning.empty());
    Rational best = 0;
    for (std::size_t i = 0; i < laws.law(n).extent(); ++i) best = std::max(best, laws.law(n).probability(i));
    CHECK(rep.max_probability == best);
  }
  CHECK(check_pointwise_bound(laws.law(0), rho).max_probability == 1);
  // a lower-bound rho is flagged
  const auto lower = rho_rayleigh_ball(mu, 2);
  const auto rep = check_pointwise_bound(laws.law(4), lower);
  CHECK_FALSE(rep.warning.empty());
  CHECK(rep.rho_is_lower_bound);
  // a rho that is too small is caught
  SpectralRadiusEstimate tiny{0.5, RhoMethod::Supplied, false};
  CHECK_FALSE(check_pointwise_bound(laws.law(6), tiny).holds());
}

// ---------------------------------------------------------------------------

TEST_CASE("Wilson interval") {
  const auto w = wilson_interval(50, 100, 1.959963984540054);
  CHECK(w.low == doctest::Approx(0.40383153).epsilon(1e-7));
  CHECK(w.high == doctest::Approx(0.59616847).epsilon(1e-7));
  CHECK(wilson_interval(0, 10).low == 0.0);
  CHECK(wilson_interval(10, 10).high == doctest::Approx(1.0));
}

TEST_CASE("sampling returns to the identity at the exact rate") {
  const auto mu = lazy(F2());
  const std::vector<PathEvent> ev{{"e", [](const Element& g) { return g.is_identity(); }}};
  const auto r = sample_paths(mu, 2, 1'000'000, 42, ev);
  CHECK(r.events[0].interval.contains(0.2));
  CHECK(r.events[0].trials == 1'000'000);
  std::uint64_t total = 0;
  for (const auto& [x, c] : r.counts) total += c;
  CHECK(total == 1'000'000);
}

TEST_CASE("sampling is deterministic and thread independent") {
  const auto mu = lazy(make_model("fpc:2,3"), 1, 4);
  const auto a = sample_paths(mu, 7, 200'000, 9, {}, 1);
  const auto b = sample_paths(mu, 7, 200'000, 9, {}, 3);
  const auto c = sample_paths(mu, 7, 200'000, 10, {}, 1);
  CHECK(a.to_csv(mu.model()) == b.to_csv(mu.model()));
  CHECK(a.to_csv(mu.model()) != c.to_csv(mu.model()));
  const auto one = sample_paths(mu, 5, 1, 3);
  CHECK(one.counts.size() == 1);
  CHECK(one.counts[0].first.length() <= 5);
  CHECK_THROWS_AS(sample_paths(mu, 5, 0, 3), Error);
}

TEST_CASE("sampled law passes a chi-square test against the exact law") {
  const auto mu = lazy(F2());
  const auto law = n_step_distribution(mu, 3, Arithmetic::Exact);
  const auto r = sample_paths(mu, 3, 200'000, 5);
  std::vector<double> expected;
  std::vector<std::uint64_t> observed;
  for (std::size_t i = 0; i < law.extent(); ++i) {
    expected.push_back(law.probability_double(i));
    observed.push_back(r.count_of(law.ball().element(i)));
  }
  CHECK(chi_square_test(expected, observed, 200'000).p_value > 0.001);
  // a wrong law is rejected
  std::rotate(expected.begin(), expected.begin() + 1, expected.end());
  CHECK(chi_square_test(expected, observed, 200'000).p_value < 1e-6);
}

TEST_CASE("chi-square statistic by hand") {
  // observed 30/70 against 1/2: (20^2/50) * 2 = 16, one degree of freedom
  const auto r = chi_square_test({0.5, 0.5}, {30, 70}, 100);
  CHECK(r.statistic == doctest::Approx(16.0));
  CHECK(r.degrees_of_freedom == 1);
  CHECK(r.p_value == doctest::Approx(6.334248e-05).epsilon(1e-5));
}

// ---------------------------------------------------------------------------

TEST_CASE("a0") {
  CHECK(compute_a0(0, 1, 1.0) == 1);
  CHECK(compute_a0(2, 1, 1.0) == 2);
  CHECK(compute_a0(0, 8, 1.0) == static_cast<int>(std::floor(std::log(8.0) + 1.0)));
  CHECK(compute_a0(1, 6, 1.0) == static_cast<int>(std::floor(0.5 + std::log(6.0) + 1.0)));
  CHECK_THROWS_AS(compute_a0(0, 0, 1.0), Error);
}

TEST_CASE("coupled walk structure") {
  auto m = F2();
  const auto mu = lazy(m);
  for (std::uint64_t i = 0; i < 500; ++i) {
    // the ball of radius 1 around a word of length 12 is out of reach in 5 steps
    const auto t = simulate_coupled_walk(mu, m->parse("aaaaaaaaaaaa"), 1, 5, 3, i);
    CHECK_FALSE(t.T.has_value());
    CHECK(t.spliced == t.primary);
  }
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto t = simulate_coupled_walk(mu, m->identity(), 0, 6, 3, i);
    REQUIRE(t.T.has_value());
    CHECK(*t.T == 0);
    CHECK(t.spliced == t.primary);
    CHECK(t.valid_path);
  }
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const auto t = simulate_coupled_walk(mu, m->parse("ab"), 1, 6, 5, i);
    CHECK(t.valid_path);
    CHECK(t.spliced.front().is_identity());
    if (t.T) {
      CHECK(m->distance(t.primary[static_cast<std::size_t>(*t.T)], m->parse("ab")) <= 1);
      for (int k = 0; k < *t.T; ++k) CHECK(m->distance(t.primary[static_cast<std::size_t>(k)], m->parse("ab")) > 1);
    }
  }
}

TEST_CASE("spliced walk has the law of the walk") {
  auto m = F2();
  const auto mu = lazy(m);
  const auto law = n_step_distribution(mu, 3, Arithmetic::Exact);
  std::vector<std::uint64_t> obs(law.extent(), 0);
  const std::uint64_t N = 200'000;
  for (std::uint64_t i = 0; i < N; ++i) {
    const auto t = simulate_coupled_walk(mu, m->parse("ab"), 1, 3, 8, i);
    ++obs[*law.ball().find(t.spliced.back())];
  }
  std::vector<double> expected;
  for (std::size_t i = 0; i < law.extent(); ++i) expected.push_back(law.probability_double(i));
  CHECK(chi_square_test(expected, obs, N).p_value > 0.001);
}

TEST_CASE("splitting inequality") {
  auto m = F2();
  const auto mu = lazy(m);
  const PointProbabilities probs(mu, 6);
  const auto r = verify_splitting_inequality(mu, probs, m->parse("a"), m->parse("b"), 0, 6, 1.0);
  CHECK(r.holds());
  CHECK(r.a0 == compute_a0(0, 6, 1.0));
  // independent recomputation of both sides from brute-force laws
  const auto ref = oracle::free_laws(oracle::lazy_uniform(2, oracle::Q(1, 5)), 12);
  auto P = [&](int n, const std::string& w) {
    auto it = ref[static_cast<std::size_t>(n)].find(w);
    return it == ref[static_cast<std::size_t>(n)].end() ? oracle::Q(0) : it->second;
  };
  oracle::Q c_pow = 1;
  for (int i = 0; i < 2 * r.a0; ++i) c_pow *= oracle::Q(1, 5);
  CHECK(r.lhs == c_pow * P(6, "ab"));
  oracle::Q rhs = 0;
  for (int k = 0; k <= 6 + 2 * r.a0; ++k) rhs += P(k, "a") * P(6 + 2 * r.a0 - k, "b");
  CHECK(r.rhs == rhs);

  // h1 = e: laziness alone gives the inequality
  const auto e = verify_splitting_inequality(mu, probs, m->identity(), m->parse("ab"), 0, 4, 1.0);
  CHECK(e.holds());
  // defect larger than K is a precondition failure
  CHECK_THROWS_AS(verify_splitting_inequality(mu, probs, m->parse("a"), m->parse("A"), 1, 4, 1.0), Error);
}

TEST_CASE("splitting sweep on a small ball") {
  const auto mu = lazy(F2());
  const auto rep = sweep_splitting_inequality(mu, 2, 2, 4, 1.0);
  CHECK(rep.violation_count == 0);
  CHECK(rep.tuples_checked > 0);
  CHECK(rep.max_defect <= 1.0);
}
