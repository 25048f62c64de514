#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hyperwalk/geometry.hpp"
#include "hyperwalk/measure.hpp"

namespace hyperwalk {

using Json = nlohmann::ordered_json;

/// Names accepted by run_check.
const std::vector<std::string>& check_ids();

/// Runs one named check and returns its report. The report always carries
/// "check", "verdict" (PASS, ADVISORY or FAIL) and "config". `mu` may be
/// null, in which case checks that need a walk use lazy-uniform:1/5.
Json run_check(std::string_view id, const ModelPtr& model, const StepMeasure* mu, const Json& options);

struct ExperimentArtifacts {
  std::string series_csv;
  Json summary;  // fit, verdict and configuration
  std::string plot_data;
};

/// kind is "kesten", "theorem1" or "conjclass".
ExperimentArtifacts run_experiment_kind(std::string_view kind, const StepMeasure& mu, const Json& options);

struct WalkArtifacts {
  std::string csv;
  Json summary;
};

WalkArtifacts walk_exact(const StepMeasure& mu, int n, std::string_view mode, std::size_t guard);
WalkArtifacts walk_sample(const StepMeasure& mu, int n, std::uint64_t count, std::uint64_t seed, int threads);

Json to_json(const ScanReport& r);
Json to_json(const HyperbolicityConstant& d);

/// delta from options["delta"] when present, otherwise the backend default.
HyperbolicityConstant resolve_delta(const ModelPtr& model, const Json& options);

}  // namespace hyperwalk
