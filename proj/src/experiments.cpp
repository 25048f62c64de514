#include "hyperwalk/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "hyperwalk/error.hpp"
#include "hyperwalk/geometry.hpp"

namespace hyperwalk {

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Advisory: return "ADVISORY";
    case Verdict::Fail: return "FAIL";
  }
  return "FAIL";
}

const SeriesPoint* ExperimentSeries::at(int n) const {
  for (const auto& p : points) {
    if (p.n == n) return &p;
  }
  return nullptr;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

long double power_bound(int n, double A, double rho) {
  return std::pow(static_cast<long double>(n), static_cast<long double>(A)) *
         std::pow(static_cast<long double>(rho), static_cast<long double>(n));
}

double ratio(const BigInt& num, const BigInt& den) {
  return static_cast<double>(to_long_double(Rational(num, den)));
}

}  // namespace

std::string ExperimentSeries::to_csv() const {
  std::ostringstream out;
  out << "n,value,ci_low,ci_high,method\n";
  for (const auto& p : points) {
    out << p.n << ',' << fmt(p.value) << ',' << fmt(p.ci_low) << ',' << fmt(p.ci_high) << ',' << p.method << '\n';
  }
  return out.str();
}

RateFit fit_rate(const ExperimentSeries& series, int window_low, int window_high, int degree) {
  if (degree != 0 && degree != 1) throw Error(ErrorCode::InvalidArgument, "fit degree must be 0 or 1", "degree");
  std::vector<const SeriesPoint*> pts;
  for (const auto& p : series.points) {
    if (p.n < window_low || p.n > window_high) continue;
    if (!(p.value > 0.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "fit window contains a nonpositive value at n = " + std::to_string(p.n), "window");
    }
    if (degree == 1 && p.n < 1) continue;
    pts.push_back(&p);
  }
  const int cols = degree == 1 ? 3 : 2;
  if (static_cast<int>(pts.size()) < cols) {
    throw Error(ErrorCode::InvalidArgument, "fit window has too few points", "window");
  }
  Eigen::MatrixXd X(pts.size(), cols);
  Eigen::VectorXd y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double n = pts[i]->n;
    X(static_cast<Eigen::Index>(i), 0) = n;
    if (degree == 1) X(static_cast<Eigen::Index>(i), 1) = std::log(n);
    X(static_cast<Eigen::Index>(i), cols - 1) = 1.0;
    y(static_cast<Eigen::Index>(i)) = std::log(pts[i]->value);
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  RateFit f;
  f.rho_hat = std::exp(beta(0));
  f.c_hat = degree == 1 ? beta(1) : 0.0;
  f.intercept = beta(cols - 1);
  f.residual = (X * beta - y).norm();
  f.window_low = window_low;
  f.window_high = window_high;
  f.degree = degree;
  f.points = pts.size();
  return f;
}

std::string plot_data(const ExperimentSeries& series, double rho) {
  std::ostringstream out;
  out << "# n log(q_n/rho^n)\n";
  for (const auto& p : series.points) {
    if (!(p.value > 0.0)) continue;
    out << p.n << ' ' << fmt(std::log(p.value) - p.n * std::log(rho)) << '\n';
  }
  return out.str();
}

double A_star(const ExperimentSeries& series, double rho) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : series.points) {
    if (p.n < 2 || !(p.value > 0.0)) continue;
    best = std::max(best, (std::log(p.value) - p.n * std::log(rho)) / std::log(static_cast<double>(p.n)));
  }
  return best;
}

// ---------------------------------------------------------------------------

KestenResult run_kesten(const StepMeasure& mu, const KestenConfig& cfg) {
  KestenResult r;
  r.series.label = "P(g_2n = e)^(1/2n)";
  r.returns.label = "P(g_2n = e)";
  r.exact_returns = return_probabilities(mu, cfg.half_max, cfg.guard);
  if (mu.free_lazy_uniform_alpha()) r.closed_form = rho_closed_form_free(mu);
  std::vector<double> roots;
  for (int m = 1; m <= cfg.half_max; ++m) {
    const long double p = to_long_double(r.exact_returns[static_cast<std::size_t>(m - 1)]);
    const double root = static_cast<double>(std::pow(p, 1.0L / (2.0L * m)));
    roots.push_back(root);
    r.series.add_exact(2 * m, root);
    r.returns.add_exact(2 * m, static_cast<double>(p));
    if (r.closed_form && root > r.closed_form->value) r.below_closed_form = false;
  }
  // P(g_4m = e) >= P(g_2m = e)^2, i.e. the root at 4m is at least the root at 2m
  for (int m = 1; 2 * m <= cfg.half_max; ++m) {
    const Rational& a = r.exact_returns[static_cast<std::size_t>(m - 1)];
    const Rational& b = r.exact_returns[static_cast<std::size_t>(2 * m - 1)];
    if (b < a * a) r.doubling_monotone = false;
  }
  r.final_value = roots.back();
  r.final_above_threshold = r.final_value >= cfg.threshold;
  if (2 * cfg.half_max >= cfg.fit_low + 3) r.fit = fit_rate(r.returns, cfg.fit_low, 2 * cfg.half_max, 1);
  r.verdict = r.below_closed_form && r.doubling_monotone && r.final_above_threshold ? Verdict::Pass : Verdict::Fail;
  return r;
}

// ---------------------------------------------------------------------------

std::vector<std::uint64_t> proper_power_hits(const StepMeasure& mu, int n_max, std::uint64_t samples,
                                             std::uint64_t seed, int threads, const PowerDetector& detector) {
  const auto& model = mu.model();
  const StepSampler sampler(mu);
  const auto& atoms = mu.atoms();
  bool letters_only = model.kind() == BackendKind::FreeGroup;
  for (const auto& a : atoms) letters_only = letters_only && a.element.length() <= 1;

  std::vector<std::vector<std::uint64_t>> partial(shard_count(samples));
  if (letters_only) {
    // step letters; 255 marks the identity
    std::vector<std::uint8_t> step;
    for (const auto& a : atoms) step.push_back(a.element.is_identity() ? 255 : a.element.word()[0]);
    std::vector<std::vector<int>> prime_factors(static_cast<std::size_t>(n_max) + 1);
    for (int L = 2; L <= n_max; ++L) {
      int rest = L;
      for (int p = 2; p * p <= rest; ++p) {
        if (rest % p == 0) {
          prime_factors[static_cast<std::size_t>(L)].push_back(p);
          while (rest % p == 0) rest /= p;
        }
      }
      if (rest > 1) prime_factors[static_cast<std::size_t>(L)].push_back(rest);
    }
    for_each_shard(samples, threads, [&](std::uint64_t shard, std::uint64_t first, std::uint64_t end) {
      auto& hits = partial[shard];
      hits.assign(static_cast<std::size_t>(n_max) + 1, 0);
      std::vector<std::uint8_t> w(static_cast<std::size_t>(n_max) + 1);
      for (std::uint64_t path = first; path < end; ++path) {
        StreamRng rng(seed, shard, path);
        int size = 0;
        ++hits[0];
        for (int n = 1; n <= n_max; ++n) {
          const std::uint8_t l = step[sampler.draw(rng)];
          if (l != 255) {
            if (size > 0 && w[static_cast<std::size_t>(size - 1)] == (l ^ 1u)) {
              --size;
            } else {
              w[static_cast<std::size_t>(size++)] = l;
            }
          }
          // cyclic core w[i..j], then periodicity with period L/p for primes p | L
          int i = 0, j = size - 1;
          while (i < j && w[static_cast<std::size_t>(i)] == (w[static_cast<std::size_t>(j)] ^ 1u)) ++i, --j;
          const int L = j - i + 1;
          bool power = L <= 0;
          if (L >= 2) {
            for (int p : prime_factors[static_cast<std::size_t>(L)]) {
              const int q = L / p;
              int k = 0;
              while (k < L - q && w[static_cast<std::size_t>(i + k)] == w[static_cast<std::size_t>(i + k + q)]) ++k;
              if (k == L - q) {
                power = true;
                break;
              }
            }
          }
          if (power) ++hits[static_cast<std::size_t>(n)];
        }
      }
    });
  } else {
    for_each_shard(samples, threads, [&](std::uint64_t shard, std::uint64_t first, std::uint64_t end) {
      auto& hits = partial[shard];
      hits.assign(static_cast<std::size_t>(n_max) + 1, 0);
      for (std::uint64_t path = first; path < end; ++path) {
        StreamRng rng(seed, shard, path);
        Element g = model.identity();
        ++hits[0];
        for (int n = 1; n <= n_max; ++n) {
          g = model.multiply(g, atoms[sampler.draw(rng)].element);
          if (detector.detect(g)) ++hits[static_cast<std::size_t>(n)];
        }
      }
    });
  }
  std::vector<std::uint64_t> total(static_cast<std::size_t>(n_max) + 1, 0);
  for (const auto& h : partial) {
    for (std::size_t n = 0; n < h.size(); ++n) total[n] += h[n];
  }
  return total;
}

Theorem1Result run_theorem1(const StepMeasure& mu, const Theorem1Config& cfg, const double* delta_override) {
  if (cfg.exact_max < 0 || cfg.mc_max < 0) throw Error(ErrorCode::InvalidArgument, "n ranges must be >= 0", "n");
  const auto& model = mu.model();
  if (auto limit = model.validated_radius();
      limit && std::max(cfg.exact_max, cfg.mc_max) * mu.max_step_length() > *limit) {
    throw Error(ErrorCode::GuardExceeded, "walk length exceeds the validated ball radius " + std::to_string(*limit),
                "n");
  }
  Theorem1Result r;
  r.series.label = "P(g_n is a proper power)";
  r.monte_carlo.label = r.series.label;
  const double delta = delta_override ? *delta_override : default_delta(mu.model_ptr()).delta;

  bool rho_exact = false;
  if (mu.free_lazy_uniform_alpha()) {
    r.rho = rho_closed_form_free(mu);
    rho_exact = true;
  } else {
    r.rho = rho_rayleigh_ball(mu, cfg.rayleigh_radius);
  }

  // exact window
  const WalkLaws laws(mu, cfg.exact_max, Arithmetic::Exact, cfg.guard);
  const BallPtr& ball = laws.ball_ptr();
  const PowerDetector detector(mu.model_ptr(), delta, model.is_free_type() ? nullptr : ball);
  const std::size_t extent = laws.law(cfg.exact_max).extent();
  std::vector<char> flag(extent, 0);
  for (std::size_t i = 0; i < extent; ++i) {
    const Element& x = ball->element(i);
    if (detector.detect(x)) {
      flag[i] = 1;
    } else if (!detector.complete_for(x)) {
      r.census_complete = false;
    }
  }
  for (int n = 0; n <= cfg.exact_max; ++n) {
    const auto& law = laws.law(n);
    BigInt hits = 0;
    for (std::size_t i = 0; i < law.extent(); ++i) {
      if (flag[i]) hits += law.numerator(i);
    }
    Rational q(hits, law.denominator());
    q.canonicalize();
    Rational ret(law.numerator(0), law.denominator());
    ret.canonicalize();
    r.exact_q.push_back(q);
    r.exact_returns.push_back(ret);
    if (q < ret) r.contains_returns = false;
    r.series.add_exact(n, ratio(hits, law.denominator()));
    if (n >= 1) {
      BoundCheck b{n, q.get_d(), power_bound(n, cfg.A, r.rho.value), true};
      b.holds = to_long_double(q) <= b.bound;
      r.bounds_hold = r.bounds_hold && b.holds;
      r.bounds.push_back(b);
    }
  }

  // Monte Carlo
  if (cfg.samples > 0 && cfg.mc_max > 0) {
    const auto hits = proper_power_hits(mu, cfg.mc_max, cfg.samples, cfg.seed, cfg.threads, detector);
    const auto N = static_cast<double>(cfg.samples);
    for (int n = 0; n <= cfg.mc_max; ++n) {
      const auto h = hits[static_cast<std::size_t>(n)];
      const auto ci = wilson_interval(h, cfg.samples);
      const SeriesPoint p{n, static_cast<double>(h) / N, ci.low, ci.high, "monte-carlo"};
      r.monte_carlo.points.push_back(p);
      if (n > cfg.exact_max) r.series.points.push_back(p);
      if (n >= 1 && n <= cfg.exact_max) {
        OverlapCheck o{n, r.exact_q[static_cast<std::size_t>(n)].get_d(), p.value, ci, true};
        o.consistent = ci.contains(o.exact);
        r.overlap_consistent = r.overlap_consistent && o.consistent;
        r.overlap.push_back(o);
      }
    }
  }

  const int top = r.series.points.back().n;
  r.fit = fit_rate(r.series, cfg.fit_low, top, 1);
  r.A_star = A_star(r.series, r.rho.value);
  r.rate_within_tolerance = std::abs(r.fit.rho_hat - r.rho.value) <= cfg.tolerance;
  if (!(r.rate_within_tolerance && r.bounds_hold)) {
    r.verdict = Verdict::Fail;
  } else if (!r.census_complete || !rho_exact) {
    r.verdict = Verdict::Advisory;
  } else {
    r.verdict = Verdict::Pass;
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

/// Conjugacy key of every ball element up to `extent`, grouped.
std::map<Element, std::vector<std::uint32_t>> class_index(const Ball& ball, std::size_t extent, int max_length) {
  std::map<Element, std::vector<std::uint32_t>> index;
  const auto& model = ball.model();
  for (std::size_t i = 0; i < extent; ++i) {
    Element key = conjugacy_key(ball.element(i), model);
    if (key.length() <= max_length) index[std::move(key)].push_back(static_cast<std::uint32_t>(i));
  }
  return index;
}

ConjClassResult conjclass_from_index(const WalkLaws& laws, const Element& key, const std::vector<std::uint32_t>& members,
                                     const ConjClassConfig& cfg, const SpectralRadiusEstimate& rho) {
  const auto& model = laws.ball().model();
  ConjClassResult r;
  r.representative = model.format(key);
  r.class_length = key.length();
  r.series.label = "P(g_n in C), C = class of " + r.representative;
  for (int n = 0; n <= cfg.n_max; ++n) {
    const auto& law = laws.law(n);
    BigInt sum = 0;
    for (auto i : members) {
      if (i < law.extent()) sum += law.numerator(i);
    }
    Rational p(sum, law.denominator());
    p.canonicalize();
    r.exact.push_back(p);
    r.series.add_exact(n, ratio(sum, law.denominator()));
    if (n >= 1) {
      BoundCheck b{n, p.get_d(), power_bound(n, cfg.A, rho.value), true};
      b.holds = to_long_double(p) <= b.bound;
      if (!b.holds) r.verdict = Verdict::Fail;
      r.bounds.push_back(b);
    }
  }
  if (r.verdict == Verdict::Pass && rho.is_lower_bound) r.verdict = Verdict::Advisory;
  return r;
}

}  // namespace

ConjClassResult run_conjclass_bound(const StepMeasure& mu, const Element& class_element, const ConjClassConfig& cfg,
                                    const SpectralRadiusEstimate& rho) {
  const auto& model = mu.model();
  const Element key = conjugacy_key(class_element, model);
  const WalkLaws laws(mu, cfg.n_max, Arithmetic::Exact, cfg.guard);
  const Ball& ball = laws.ball();
  std::vector<std::uint32_t> members;
  const std::size_t extent = laws.law(cfg.n_max).extent();
  for (std::size_t i = 0; i < extent; ++i) {
    if (ball.length(i) >= key.length() && conjugacy_key(ball.element(i), model) == key) {
      members.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return conjclass_from_index(laws, key, members, cfg, rho);
}

std::vector<ConjClassResult> run_conjclass_sweep(const StepMeasure& mu, int max_length, const ConjClassConfig& cfg,
                                                 const SpectralRadiusEstimate& rho) {
  const WalkLaws laws(mu, cfg.n_max, Arithmetic::Exact, cfg.guard);
  const auto index = class_index(laws.ball(), laws.law(cfg.n_max).extent(), max_length);
  std::vector<ConjClassResult> out;
  for (const auto& [key, members] : index) out.push_back(conjclass_from_index(laws, key, members, cfg, rho));
  return out;
}

std::vector<Element> conjugacy_classes_up_to(const GroupModel& model, int max_length) {
  std::set<Element> keys;
  const auto ball = Ball::enumerate(std::shared_ptr<const GroupModel>(&model, [](const GroupModel*) {}), max_length);
  for (const auto& x : ball->elements()) keys.insert(conjugacy_key(x, model));
  return {keys.begin(), keys.end()};
}

SymmetryReport verify_symmetry_identity(const WalkLaws& laws, const Element& class_element, int k2, int k4) {
  if (k2 < 0 || k4 < 0 || std::max(k2, k4) > laws.n_max()) {
    throw Error(ErrorCode::GuardExceeded, "symmetry identity needs exact laws up to max(k2, k4)", "k");
  }
  const Ball& ball = laws.ball();
  const auto& model = ball.model();
  const Element key = conjugacy_key(class_element, model);
  const auto& law2 = laws.law(k2);
  const auto& law4 = laws.law(k4);
  BigInt lhs = 0, rhs = 0;
  for (std::size_t i = 0; i < law2.extent(); ++i) {
    const BigInt& a = law2.numerator(i);
    if (a == 0) continue;
    const Element& h = ball.element(i);
    if (!(conjugacy_key(h, model) == key)) continue;
    if (i < law4.extent()) lhs += a * law4.numerator(i);
    if (auto j = ball.find(model.invert(h)); j && *j < law4.extent()) rhs += a * law4.numerator(*j);
  }
  SymmetryReport r;
  r.k2 = k2;
  r.k4 = k4;
  r.class_representative = model.format(key);
  const BigInt den = law2.denominator() * law4.denominator();
  r.lhs = Rational(lhs, den);
  r.lhs.canonicalize();
  r.rhs = Rational(rhs, den);
  r.rhs.canonicalize();
  return r;
}

SymmetryReport verify_symmetry_identity(const StepMeasure& mu, const Element& class_element, int k2, int k4) {
  const WalkLaws laws(mu, std::max(k2, k4), Arithmetic::Exact);
  return verify_symmetry_identity(laws, class_element, k2, k4);
}

StepMeasure asymmetric_control_measure(const ModelPtr& free2) {
  const auto& m = *free2;
  return StepMeasure::unchecked(free2, {{m.parse("e"), Rational(1, 5)},
                                        {m.parse("a"), Rational(3, 10)},
                                        {m.parse("A"), Rational(1, 10)},
                                        {m.parse("b"), Rational(1, 5)},
                                        {m.parse("B"), Rational(1, 5)}});
}

}  // namespace hyperwalk
