#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperwalk/distribution.hpp"
#include "hyperwalk/measure.hpp"
#include "hyperwalk/powers.hpp"
#include "hyperwalk/sampling.hpp"
#include "hyperwalk/spectral.hpp"

namespace hyperwalk {

enum class Verdict { Pass, Advisory, Fail };

const char* verdict_name(Verdict v) noexcept;

struct SeriesPoint {
  int n = 0;
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::string method;  // "exact" or "monte-carlo"
};

struct ExperimentSeries {
  std::string label;
  std::vector<SeriesPoint> points;  // n strictly increasing

  void add_exact(int n, double value) { points.push_back({n, value, value, value, "exact"}); }
  const SeriesPoint* at(int n) const;
  /// "n,value,ci_low,ci_high,method".
  std::string to_csv() const;
};

/// log q_n ~ n log rho_hat + c_hat log n + intercept.
struct RateFit {
  double rho_hat = 0.0;
  double c_hat = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // Euclidean norm of the log-domain residual
  int window_low = 0;
  int window_high = 0;
  int degree = 1;  // 1 with the log n term, 0 without
  std::size_t points = 0;
};

/// Least squares over the points with window_low <= n <= window_high.
/// Throws InvalidArgument on nonpositive values in the window.
RateFit fit_rate(const ExperimentSeries& series, int window_low, int window_high, int degree = 1);

/// Two columns "n log(q_n / rho^n)" for plotting.
std::string plot_data(const ExperimentSeries& series, double rho);

/// max over n >= 2 of log(q_n / rho^n) / log n.
double A_star(const ExperimentSeries& series, double rho);

// ---------------------------------------------------------------------------

struct KestenConfig {
  int half_max = 20;        // uses P(g_{2m} = e), m = 1..half_max
  double threshold = 0.80;  // required final value
  int fit_low = 5;
  std::size_t guard = kDefaultSupportGuard;
};

struct KestenResult {
  ExperimentSeries series;      // n = 2m, value P(g_2m = e)^{1/2m}
  ExperimentSeries returns;     // n = 2m, value P(g_2m = e)
  std::vector<Rational> exact_returns;
  RateFit fit;                  // on the returns
  std::optional<SpectralRadiusEstimate> closed_form;
  bool below_closed_form = true;
  bool doubling_monotone = true;
  bool final_above_threshold = true;
  double final_value = 0.0;
  Verdict verdict = Verdict::Pass;
};

KestenResult run_kesten(const StepMeasure& mu, const KestenConfig& cfg = {});

struct Theorem1Config {
  int exact_max = 12;
  int mc_max = 40;
  std::uint64_t samples = 10'000'000;
  std::uint64_t seed = 1;
  int threads = 1;
  double A = 5.0;
  double tolerance = 0.02;
  int fit_low = 5;
  int rayleigh_radius = 8;  // used when no closed form exists
  std::size_t guard = kDefaultSupportGuard;
};

struct BoundCheck {
  int n = 0;
  double q = 0.0;
  long double bound = 0.0L;  // n^A rho^n
  bool holds = true;
};

struct OverlapCheck {
  int n = 0;
  double exact = 0.0;
  double estimate = 0.0;
  WilsonInterval interval;
  bool consistent = true;
};

struct Theorem1Result {
  ExperimentSeries series;     // exact up to exact_max, Monte Carlo beyond
  ExperimentSeries monte_carlo;  // all Monte Carlo points 1..mc_max
  std::vector<Rational> exact_q;  // n = 0..exact_max
  std::vector<Rational> exact_returns;
  SpectralRadiusEstimate rho;
  RateFit fit;
  std::vector<BoundCheck> bounds;     // exact points n >= 1
  std::vector<OverlapCheck> overlap;  // exact points covered by Monte Carlo
  bool contains_returns = true;       // q_n >= P(g_n = e) at exact points
  bool census_complete = true;
  double A_star = 0.0;
  bool rate_within_tolerance = false;
  bool bounds_hold = true;
  bool overlap_consistent = true;
  Verdict verdict = Verdict::Pass;
};

Theorem1Result run_theorem1(const StepMeasure& mu, const Theorem1Config& cfg = {}, const double* delta = nullptr);

/// Counts, per step, paths whose position is a proper power. hits[n] for n
/// = 0..n_max; the free-group path avoids building elements.
std::vector<std::uint64_t> proper_power_hits(const StepMeasure& mu, int n_max, std::uint64_t samples,
                                             std::uint64_t seed, int threads, const PowerDetector& detector);

struct ConjClassConfig {
  int n_max = 12;
  double A = 3.0;
  std::size_t guard = kDefaultSupportGuard;
};

struct ConjClassResult {
  std::string representative;
  int class_length = 0;
  ExperimentSeries series;  // n = 0..n_max, P(g_n in C)
  std::vector<Rational> exact;
  std::vector<BoundCheck> bounds;  // n >= 1
  Verdict verdict = Verdict::Pass;
};

/// P(g_n in C) <= n^A rho^n for n = 1..n_max, exactly. Free-type backends.
ConjClassResult run_conjclass_bound(const StepMeasure& mu, const Element& class_element, const ConjClassConfig& cfg,
                                    const SpectralRadiusEstimate& rho);

/// Every class with |C| <= max_length, sharing one set of laws.
std::vector<ConjClassResult> run_conjclass_sweep(const StepMeasure& mu, int max_length, const ConjClassConfig& cfg,
                                                 const SpectralRadiusEstimate& rho);

/// Representatives of every conjugacy class with |C| <= max_length (free-type).
std::vector<Element> conjugacy_classes_up_to(const GroupModel& model, int max_length);

struct SymmetryReport {
  int k2 = 0, k4 = 0;
  std::string class_representative;
  Rational lhs;  // sum_{h in C} P(g_k2 = h) P(g_k4 = h)
  Rational rhs;  // P(g_{k2+k4} = e and g_k2 in C) = sum_{h in C} P(g_k2 = h) P(g_k4 = h^-1)
  bool equal() const { return lhs == rhs; }
};

/// Exact check of the symmetry identity; `laws` must reach max(k2, k4).
SymmetryReport verify_symmetry_identity(const WalkLaws& laws, const Element& class_element, int k2, int k4);
SymmetryReport verify_symmetry_identity(const StepMeasure& mu, const Element& class_element, int k2, int k4);

/// The asymmetric measure used as a negative control on F_2:
/// e = 1/5, a = 3/10, A = 1/10, b = 1/5, B = 1/5 (validation bypassed).
StepMeasure asymmetric_control_measure(const ModelPtr& free2);

}  // namespace hyperwalk
