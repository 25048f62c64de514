#pragma once

#include <string>
#include <vector>

#include "hyperwalk/distribution.hpp"
#include "hyperwalk/measure.hpp"
#include "hyperwalk/rational.hpp"

namespace hyperwalk {

enum class RhoMethod { ClosedForm, ReturnProbability, RayleighBall, Supplied };

const char* rho_method_name(RhoMethod m) noexcept;

struct SpectralRadiusEstimate {
  double value = 1.0;
  RhoMethod method = RhoMethod::ClosedForm;
  bool is_lower_bound = false;
  int parameter = 0;   // n_max for returns, R for the ball estimate
  int iterations = 0;  // power iterations used (ball estimate)
};

/// alpha + (1 - alpha) sqrt(2k - 1) / k for the walk that stays put with
/// probability alpha and otherwise moves along a uniform free generator.
SpectralRadiusEstimate rho_closed_form_free(int rank, double alpha);
/// Same, read off a measure; throws Unsupported if mu has another shape.
SpectralRadiusEstimate rho_closed_form_free(const StepMeasure& mu);

/// Exact return probabilities P(g_{2m} = e) for m = 1..half_max, as
/// fractions. Lazy-uniform free-group walks use the radial birth-death
/// chain; other measures use exact convolution to half_max steps and
/// P(g_{2m} = e) = sum_y P(g_m = y) P(g_m = y^-1).
std::vector<Rational> return_probabilities(const StepMeasure& mu, int half_max,
                                           std::size_t guard = kDefaultSupportGuard);

/// Laws of |g_n| for the lazy-uniform walk on the free group of rank k, by
/// the radial chain; entry [n][r] = P(|g_n| = r), n = 0..n_max.
std::vector<std::vector<Rational>> radial_laws(int rank, const Rational& alpha, int n_max);

/// max over m <= half_max of P(g_{2m} = e)^{1/(2m)}; a lower bound for rho.
SpectralRadiusEstimate rho_from_returns(const StepMeasure& mu, int half_max,
                                        std::size_t guard = kDefaultSupportGuard);

/// Power iteration of the convolution operator compressed to the ball of
/// radius R. Stops when successive Rayleigh quotients differ by less than
/// `tolerance` or after `max_iterations`. A lower bound for rho.
SpectralRadiusEstimate rho_rayleigh_ball(const StepMeasure& mu, int radius, double tolerance = 1e-12,
                                         int max_iterations = 10'000);

struct PointwiseBoundReport {
  int n = 0;
  double rho = 1.0;
  bool rho_is_lower_bound = false;
  Rational max_probability;
  std::string argmax;  // formatted element attaining the max
  long double bound = 1.0L;
  std::uint64_t violations = 0;
  std::string warning;
  bool holds() const noexcept { return violations == 0; }
};

/// max_g P(g_n = g) <= rho^n over the exact law.
PointwiseBoundReport check_pointwise_bound(const Distribution& law, const SpectralRadiusEstimate& rho);
PointwiseBoundReport check_pointwise_bound(const StepMeasure& mu, int n, const SpectralRadiusEstimate& rho);

}  // namespace hyperwalk
