#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperwalk/ball.hpp"
#include "hyperwalk/geometry.hpp"
#include "hyperwalk/rng.hpp"

namespace hyperwalk {

/// x = conjugator * core * conjugator^-1.
struct CyclicReduction {
  Element core;
  Element conjugator;
};

/// Free-type backends only (throws Unsupported otherwise). The core is
/// cyclically reduced and of minimal length in the conjugacy class.
CyclicReduction cyclic_reduce(const Element& x, const GroupModel& model);

/// Shortlex-least minimal-length word among the cyclic conjugates of the
/// core; equal for two elements iff they are conjugate (free-type backends).
Element conjugacy_key(const Element& x, const GroupModel& model);

struct ConjugacyClass {
  Element representative;  // h_min
  int length = 0;          // |C|
  std::vector<Element> cyclic_conjugates;  // P_C, shortlex
  bool small_case = false;  // P_C = {h in C : |h| <= 9 delta}
  bool finite_order = false;
};

/// Free-type backends: P_C is the set of cyclic conjugates of h_min.
/// Ball backends: class members are found by conjugating with ball elements
/// (guard |x| <= R/3); P_C follows the two cases split at 9 delta.
ConjugacyClass conjugacy_class_of(const Element& x, const GroupModel& model, double delta,
                                  const Ball* ball = nullptr);

/// x = conjugator * base^exponent * conjugator^-1.
struct PowerWitness {
  Element base;
  int exponent = 2;
  Element conjugator;
  bool identity_convention = false;  // x = e counted as e^2
};

/// Decides whether x is a proper power. Free-type backends are exact. Ball
/// backends search powers h^d inside `ball` and conjugators of length at
/// most (R - |x|)/2; a witness found there is always correct but a miss is
/// only conclusive when complete_for(x) holds.
class PowerDetector {
 public:
  PowerDetector(ModelPtr model, double delta, BallPtr ball = nullptr);

  std::optional<PowerWitness> detect(const Element& x) const;
  /// True when a negative answer for x is certified.
  bool complete_for(const Element& x) const;
  bool exact() const noexcept { return model_->is_free_type(); }

 private:
  ModelPtr model_;
  double delta_;
  BallPtr ball_;
  std::unordered_map<Word, std::pair<std::uint32_t, int>, WordHash> powers_;  // h^d -> (index of h, d)
};

/// Convenience wrapper for free-type backends.
std::optional<PowerWitness> is_proper_power(const Element& x, const GroupModel& model);

/// g h^d g^-1.
Element reassemble(const PowerWitness& w, const GroupModel& model);

struct CensusEntry {
  Element element;
  std::optional<PowerWitness> witness;
  bool complete = true;
};

/// Every element of `ball` with |x| <= inner_radius, in shortlex order.
std::vector<CensusEntry> proper_power_census(const Ball& ball, int inner_radius, double delta);

/// "word,is_proper_power,witness_base,witness_exponent,witness_conjugator,complete_flag".
std::string census_to_csv(const std::vector<CensusEntry>& census, const GroupModel& model);

struct ConjugateDecomposition {
  Element x, g, h;
  int x_length = 0, g_length = 0, h_length = 0;
  int ledger = 0;      // |g| + |h| + |g^-1|
  double bound = 0.0;  // |x| + 14 delta
  double slack() const noexcept { return bound - ledger; }
};

/// x = g h g^-1 with h in P_C and |g| minimal (ties shortlex). Throws
/// BoundViolation if |g| + |h| + |g| > |x| + 14 delta.
ConjugateDecomposition decompose_conjugate(const Element& x, const GroupModel& model, double delta,
                                           const Ball* ball = nullptr);

enum class DecompositionStatus { HypothesisNotMet, Holds, Violated };

const char* decomposition_status_name(DecompositionStatus s) noexcept;

struct PowerDecomposition {
  DecompositionStatus status = DecompositionStatus::HypothesisNotMet;
  Element x;                 // g h^d g^-1
  int class_length = 0;      // |C(h)|
  int d = 2;
  int g_length = 0, h_length = 0, middle_length = 0;  // |h^{d-2}|
  int power_length = 0;      // |h^d|
  int x_length = 0;
  int ledger34 = 0;          // |g| + |h| + |h^{d-2}| + |h| + |g^-1|
  double bound34 = 0.0;      // |x| + 34 delta
  int ledger8 = 0;           // |h| + |h^{d-2}| + |h|
  double bound8 = 0.0;       // |h^d| + 8 delta
  bool holds34() const noexcept { return ledger34 <= bound34; }
  bool holds8() const noexcept { return ledger8 <= bound8; }
};

/// Both ledgers for x = g h^d g^-1. The hypothesis is |C(h)| >= 16 delta.
PowerDecomposition decompose_power(const Element& h, int d, const Element& g, const GroupModel& model, double delta,
                                   const Ball* ball = nullptr);

/// Uniform cyclically reduced word of the given length in a free group.
Element sample_cyclically_reduced(const GroupModel& model, int length, StreamRng& rng);

/// Sampled sweep: `samples` cyclically reduced h with min_length <= |h| <=
/// max_length, each d in `exponents`, every g in the ball of radius
/// g_radius.
ScanReport sweep_power_decomposition(const ModelPtr& model, int min_length, int max_length, std::uint64_t samples,
                                     const std::vector<int>& exponents, int g_radius, double delta,
                                     std::uint64_t seed);

/// Exhaustive conjugate decomposition over the ball.
ScanReport sweep_conjugate_decomposition(const Ball& ball, double delta);

struct PowerGrowth {
  std::vector<int> lengths;  // |C^d| for d = 1..d_max
  bool hypothesis_met = false;  // infinite order and |C| >= 16 delta
  std::uint64_t violations = 0;  // d with |C^d| < d while the hypothesis holds
  std::string note;
};

/// |C^d| = minimal length in the class of h_min^d (free-type backends).
PowerGrowth conjugacy_power_growth(const ConjugacyClass& C, int d_max, const GroupModel& model, double delta);

}  // namespace hyperwalk
