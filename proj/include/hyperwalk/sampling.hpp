#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "hyperwalk/distribution.hpp"
#include "hyperwalk/measure.hpp"
#include "hyperwalk/rng.hpp"

namespace hyperwalk {

/// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

/// Paths per RNG shard. Path i draws from StreamRng(seed, i / kShardSize, i).
inline constexpr std::uint64_t kShardSize = 65536;

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
  bool contains(double p) const noexcept { return low <= p && p <= high; }
};

WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = kZ99);

/// Draws support indices of a measure with exact integer weights when the
/// common denominator fits in 64 bits.
class StepSampler {
 public:
  explicit StepSampler(const StepMeasure& mu);
  std::size_t draw(StreamRng& rng) const noexcept;
  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> cumulative_;  // exact mode
  std::vector<double> cumulative_double_;  // fallback
};

/// Runs fn(shard, first_path, end_path) for every shard of `count` paths on
/// up to `threads` workers. Results must be collected per shard and merged in
/// shard order by the caller so that output does not depend on `threads`.
void for_each_shard(std::uint64_t count, int threads,
                    const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& fn);

std::uint64_t shard_count(std::uint64_t paths) noexcept;

struct PathEvent {
  std::string label;
  std::function<bool(const Element&)> test;  // applied to g_n
};

struct EventEstimate {
  std::string label;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double frequency = 0.0;
  WilsonInterval interval;
};

struct SampleResult {
  int n = 0;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<Element, std::uint64_t>> counts;  // empirical law of g_n, shortlex
  std::vector<EventEstimate> events;

  std::uint64_t count_of(const Element& x) const;
  /// "word,count,frequency" rows in shortlex order.
  std::string to_csv(const GroupModel& model) const;
};

/// `count` independent paths of length n. Deterministic in (seed, count);
/// `threads` never changes the result.
SampleResult sample_paths(const StepMeasure& mu, int n, std::uint64_t count, std::uint64_t seed,
                          const std::vector<PathEvent>& events = {}, int threads = 1);

/// One path g_0..g_n drawn from stream (seed, shard, index).
std::vector<Element> sample_path(const StepMeasure& mu, const StepSampler& sampler, int n, StreamRng& rng);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  std::size_t cells = 0;
};

/// Pearson goodness of fit of observed counts against exact cell
/// probabilities; counts outside the cells form one extra cell whose
/// expected mass is 1 - sum(expected).
ChiSquareResult chi_square_test(const std::vector<double>& expected_probabilities,
                                const std::vector<std::uint64_t>& observed, std::uint64_t total);

}  // namespace hyperwalk
