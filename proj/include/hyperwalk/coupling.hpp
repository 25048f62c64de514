#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperwalk/distribution.hpp"
#include "hyperwalk/geometry.hpp"
#include "hyperwalk/measure.hpp"
#include "hyperwalk/rational.hpp"

namespace hyperwalk {

/// a0 = floor(K/2 + delta (ln n + 1)); n >= 1.
int compute_a0(int K, int n, double delta);

/// A walk g, an independent copy g', the first time T with d(g_T, h1) <= a0,
/// and the spliced walk
///   g~_m = g_m                              for m <= T
///   g~_m = g_T g'_{m-T}                     for T <= m <= T + 2 a0
///   g~_m = g_T g'_{2a0} g_T^-1 g_{m-2a0}    for m >= T + 2 a0.
struct CoupledWalkTrace {
  Element h1;
  int a0 = 0;
  int n = 0;
  std::vector<Element> primary;  // g_0 .. g_n
  std::vector<Element> copy;     // g'_0 .. g'_{2 a0}
  std::optional<int> T;          // nullopt when the ball is never hit by time n
  std::vector<Element> spliced;  // g~_0 .. g~_n
  /// g'_{2a0} = e and g'_{a0} = g_T^-1 h1 (false when T is undefined).
  bool event_A = false;
  /// Consecutive increments of the spliced path lie in the support.
  bool valid_path = false;
};

CoupledWalkTrace simulate_coupled_walk(const StepMeasure& mu, const Element& h1, int a0, int n, std::uint64_t seed,
                                       std::uint64_t path_index = 0);

struct SplittingReport {
  std::string h1, h2;
  int K = 0;
  int n = 0;
  double delta = 1.0;
  int a0 = 0;
  Rational c;    // min weight
  Rational lhs;  // c^{2a0} P(g_n = h1 h2)
  Rational rhs;  // sum_{k=0}^{n+2a0} P(g_k = h1) P(g_{n+2a0-k} = h2)
  bool holds() const { return lhs <= rhs; }
  Rational slack() const { return rhs - lhs; }
};

/// Exact check of c^{2a0} P(g_n = h1 h2) <= sum_k P(g_k = h1) P(g_{n+2a0-k} = h2).
/// Throws BoundViolation when |h1| + |h2| > |h1 h2| + K, and GuardExceeded
/// when n + 2a0 is beyond `probs.reach()`.
SplittingReport verify_splitting_inequality(const StepMeasure& mu, const PointProbabilities& probs, const Element& h1,
                                            const Element& h2, int K, int n, double delta);

/// Every h1, h2 in the ball of radius `radius`, every K in 0..K_max with
/// |h1| + |h2| - |h1 h2| <= K, every n in 1..n_max.
ScanReport sweep_splitting_inequality(const StepMeasure& mu, int radius, int K_max, int n_max, double delta,
                                      std::size_t guard = kDefaultSupportGuard);

}  // namespace hyperwalk
