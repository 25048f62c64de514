#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperwalk/ball.hpp"

namespace hyperwalk {

/// (x,y)_z = (d(x,z) + d(y,z) - d(x,y)) / 2, stored doubled so it stays an integer.
struct GromovProduct {
  long twice = 0;
  double value() const noexcept { return static_cast<double>(twice) / 2.0; }
  friend auto operator<=>(const GromovProduct&, const GromovProduct&) = default;
};

enum class DeltaProvenance { FreeGroupDefault, EstimatedOnBall, UserSupplied };

const char* provenance_name(DeltaProvenance p) noexcept;

/// A hyperbolicity constant, always >= 1.
struct HyperbolicityConstant {
  double delta = 1.0;
  DeltaProvenance provenance = DeltaProvenance::FreeGroupDefault;
  int ball_radius = -1;         // ball the estimate was computed on, -1 if none
  double raw_defect = 0.0;      // largest four-point defect seen, before flooring
  std::string mode;             // "exhaustive", "sampled", "basepoint" or ""
  std::uint64_t tuples_checked = 0;

  static HyperbolicityConstant supplied(double delta);
};

/// Common report shape for exhaustive/sampled scans.
struct ScanReport {
  std::string check;
  int ball_radius = 0;
  std::string mode;  // "exhaustive" or "sampled"
  std::uint64_t tuples_checked = 0;
  std::uint64_t hypotheses_met = 0;
  double max_defect = 0.0;
  std::uint64_t violation_count = 0;
  std::vector<std::string> violations;  // first few offending tuples, formatted

  bool passed() const noexcept { return violation_count == 0; }
  void record_violation(std::string description);
};

GromovProduct gromov_product(const Element& x, const Element& y, const Element& z, const Ball& b);

inline constexpr std::uint64_t kExhaustiveTupleLimit = 1'000'000;

/// max(1, max over quadruples in b of min((x,z)_w,(y,z)_w) - (x,y)_w).
/// Exhaustive up to `exhaustive_limit` quadruples, otherwise `samples` seeded
/// uniform draws.
HyperbolicityConstant estimate_delta_4point(const Ball& b, std::uint64_t seed = 0,
                                            std::uint64_t exhaustive_limit = kExhaustiveTupleLimit,
                                            std::uint64_t samples = kExhaustiveTupleLimit);

/// Four-point defect with the basepoint fixed at the identity and x, y, z
/// ranging over the ball. Covers every quadruple of the Cayley graph whose
/// points lie within b.radius() of one of them, by vertex transitivity.
HyperbolicityConstant estimate_delta_basepoint(const Ball& b);

/// delta = 1 for free groups; max(1, ceil(basepoint defect)) on the largest
/// ball with at most `max_ball_size` elements otherwise.
HyperbolicityConstant default_delta(const ModelPtr& model, std::size_t max_ball_size = 200);

struct Geodesic {
  std::vector<Element> vertices;  // vertices.front() = x, vertices.back() = y
  int length() const noexcept { return static_cast<int>(vertices.size()) - 1; }
};

/// Follows the canonical (shortlex-least geodesic) word of x^-1 y from x.
/// Throws BallEscape if a vertex leaves b.
Geodesic geodesic_between(const Element& x, const Element& y, const Ball& b);

struct GeodesicDistanceReport {
  GromovProduct product;        // (x,y)_z
  int distance_to_geodesic = 0;  // d(z, [x,y])
  double left_slack = 0.0;       // d(z,[x,y]) - (x,y)_z, must be >= 0
  double right_slack = 0.0;      // (x,y)_z + delta - d(z,[x,y]), must be >= 0
  bool holds() const noexcept { return left_slack >= 0.0 && right_slack >= 0.0; }
};

GeodesicDistanceReport check_geodesic_distance_bound(const Element& x, const Element& y, const Element& z,
                                                     const Ball& b, const HyperbolicityConstant& delta);

enum class CriterionStatus { HypothesesNotMet, Holds, Violated };

const char* status_name(CriterionStatus s) noexcept;

struct ConcatenationReport {
  CriterionStatus status = CriterionStatus::HypothesesNotMet;
  double lhs = 0.0;    // d(x,y) + d(y,z) + d(z,w)
  double rhs = 0.0;    // d(x,w) + 4 alpha + 2 delta
  double slack = 0.0;  // rhs - lhs
};

ConcatenationReport check_concatenation_criterion(const Element& x, const Element& y, const Element& z,
                                                  const Element& w, double alpha,
                                                  const HyperbolicityConstant& delta, const Ball& b);

/// Exhaustive four-point scan on b (sampled above the tuple limit); the
/// defect of each quadruple is reported as max_defect.
ScanReport scan_four_point(const Ball& b, std::uint64_t seed = 0);

/// Every quadruple of b against the concatenation criterion for each alpha.
ScanReport scan_concatenation(const Ball& b, const std::vector<double>& alphas, const HyperbolicityConstant& delta);

/// Every triple (x, y, z) with |x|,|y|,|z| <= inner_radius against
/// (x,y)_z <= d(z,[x,y]) <= (x,y)_z + delta; geodesics must stay in `outer`.
ScanReport scan_geodesic_distance(const Ball& outer, int inner_radius, const HyperbolicityConstant& delta);

}  // namespace hyperwalk
