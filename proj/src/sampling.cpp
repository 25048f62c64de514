#include "hyperwalk/sampling.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "hyperwalk/error.hpp"

namespace hyperwalk {

WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

StepSampler::StepSampler(const StepMeasure& mu) {
  const BigInt& d = mu.denominator();
  if (d.fits_ulong_p() && sizeof(unsigned long) == 8) {
    total_ = d.get_ui();
    std::uint64_t acc = 0;
    for (const auto& num : mu.numerators()) {
      acc += num.get_ui();
      cumulative_.push_back(acc);
    }
  } else {
    double acc = 0.0;
    for (const auto& a : mu.atoms()) {
      acc += a.weight.get_d();
      cumulative_double_.push_back(acc);
    }
    cumulative_double_.back() = 1.0;
    cumulative_.resize(cumulative_double_.size());
  }
}

std::size_t StepSampler::draw(StreamRng& rng) const noexcept {
  if (total_ != 0) {
    const std::uint64_t u = rng.below(total_);
    return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                                    cumulative_.begin());
  }
  const double u = rng.uniform();
  auto it = std::upper_bound(cumulative_double_.begin(), cumulative_double_.end(), u);
  if (it == cumulative_double_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_double_.begin());
}

std::uint64_t shard_count(std::uint64_t paths) noexcept { return (paths + kShardSize - 1) / kShardSize; }

void for_each_shard(std::uint64_t count, int threads,
                    const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& fn) {
  const std::uint64_t shards = shard_count(count);
  auto job = [&](std::uint64_t s) { fn(s, s * kShardSize, std::min(count, (s + 1) * kShardSize)); };
  const auto workers = static_cast<std::uint64_t>(std::max(1, threads));
  if (workers == 1 || shards <= 1) {
    for (std::uint64_t s = 0; s < shards; ++s) job(s);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::uint64_t t = 0; t < std::min(workers, shards); ++t) {
    pool.emplace_back([&] {
      for (std::uint64_t s = next++; s < shards; s = next++) {
        try {
          job(s);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<Element> sample_path(const StepMeasure& mu, const StepSampler& sampler, int n, StreamRng& rng) {
  const auto& model = mu.model();
  const auto& atoms = mu.atoms();
  std::vector<Element> path;
  path.reserve(static_cast<std::size_t>(n) + 1);
  path.push_back(model.identity());
  for (int i = 0; i < n; ++i) path.push_back(model.multiply(path.back(), atoms[sampler.draw(rng)].element));
  return path;
}

std::uint64_t SampleResult::count_of(const Element& x) const {
  auto it = std::lower_bound(counts.begin(), counts.end(), x,
                             [](const auto& entry, const Element& e) { return entry.first < e; });
  return it != counts.end() && it->first == x ? it->second : 0;
}

std::string SampleResult::to_csv(const GroupModel& model) const {
  std::ostringstream out;
  out << "word,count,frequency\n";
  char buf[64];
  for (const auto& [x, c] : counts) {
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(c) / static_cast<double>(count));
    out << model.format(x) << ',' << c << ',' << buf << '\n';
  }
  return out.str();
}

SampleResult sample_paths(const StepMeasure& mu, int n, std::uint64_t count, std::uint64_t seed,
                          const std::vector<PathEvent>& events, int threads) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1", "count");
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "number of steps must be >= 0", "n");
  const StepSampler sampler(mu);
  const auto& model = mu.model();
  const auto& atoms = mu.atoms();

  struct Partial {
    std::map<Element, std::uint64_t> counts;
    std::vector<std::uint64_t> hits;
  };
  std::vector<Partial> partials(shard_count(count));
  for_each_shard(count, threads, [&](std::uint64_t shard, std::uint64_t first, std::uint64_t end) {
    Partial& part = partials[shard];
    part.hits.assign(events.size(), 0);
    for (std::uint64_t i = first; i < end; ++i) {
      StreamRng rng(seed, shard, i);
      Element g = model.identity();
      for (int k = 0; k < n; ++k) g = model.multiply(g, atoms[sampler.draw(rng)].element);
      for (std::size_t e = 0; e < events.size(); ++e) part.hits[e] += events[e].test(g) ? 1 : 0;
      ++part.counts[g];
    }
  });

  SampleResult result;
  result.n = n;
  result.count = count;
  result.seed = seed;
  std::map<Element, std::uint64_t> merged;
  std::vector<std::uint64_t> hits(events.size(), 0);
  for (auto& part : partials) {
    for (const auto& [x, c] : part.counts) merged[x] += c;
    for (std::size_t e = 0; e < events.size(); ++e) hits[e] += part.hits[e];
  }
  result.counts.assign(merged.begin(), merged.end());
  for (std::size_t e = 0; e < events.size(); ++e) {
    result.events.push_back({events[e].label, hits[e], count,
                             static_cast<double>(hits[e]) / static_cast<double>(count),
                             wilson_interval(hits[e], count)});
  }
  return result;
}

ChiSquareResult chi_square_test(const std::vector<double>& expected, const std::vector<std::uint64_t>& observed,
                                std::uint64_t total) {
  if (expected.size() != observed.size()) {
    throw Error(ErrorCode::InvalidArgument, "expected and observed cell counts differ in length");
  }
  ChiSquareResult r;
  const double n = static_cast<double>(total);
  double expected_mass = 0.0;
  std::uint64_t observed_mass = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    expected_mass += expected[i];
    observed_mass += observed[i];
    if (expected[i] <= 0.0) {
      if (observed[i] != 0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    const double e = expected[i] * n;
    const double diff = static_cast<double>(observed[i]) - e;
    r.statistic += diff * diff / e;
    ++r.cells;
  }
  const double rest = 1.0 - expected_mass;
  const auto rest_observed = static_cast<double>(total - observed_mass);
  if (rest > 1e-12) {
    const double e = rest * n;
    r.statistic += (rest_observed - e) * (rest_observed - e) / e;
    ++r.cells;
  } else if (rest_observed > 0) {
    r.statistic = std::numeric_limits<double>::infinity();
  }
  r.degrees_of_freedom = static_cast<int>(r.cells) - 1;
  if (r.degrees_of_freedom < 1 || !std::isfinite(r.statistic)) {
    r.p_value = std::isfinite(r.statistic) ? 1.0 : 0.0;
    return r;
  }
  boost::math::chi_squared dist(r.degrees_of_freedom);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace hyperwalk
