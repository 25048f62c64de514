#include "hyperwalk/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "hyperwalk/error.hpp"
#include "hyperwalk/rng.hpp"

namespace hyperwalk {

namespace {

constexpr std::size_t kMaxListedViolations = 20;

/// Pairwise distances among the first `count` ball elements.
class DistanceMatrix {
 public:
  DistanceMatrix(const Ball& b, std::size_t count) : n_(count), d_(count * count, 0) {
    const auto& m = b.model();
    for (std::size_t i = 0; i < n_; ++i) {
      const Element inv = m.invert(b.element(i));
      for (std::size_t j = i + 1; j < n_; ++j) {
        const int d = m.word_length(m.multiply(inv, b.element(j)));
        d_[i * n_ + j] = static_cast<std::uint16_t>(d);
        d_[j * n_ + i] = static_cast<std::uint16_t>(d);
      }
    }
  }
  int operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  std::vector<std::uint16_t> d_;
};

/// Doubled four-point defect min((x,z)_w,(y,z)_w) - (x,y)_w.
long doubled_defect(const DistanceMatrix& d, std::size_t x, std::size_t y, std::size_t z, std::size_t w) {
  const long xz = d(x, w) + d(z, w) - d(x, z);
  const long yz = d(y, w) + d(z, w) - d(y, z);
  const long xy = d(x, w) + d(y, w) - d(x, y);
  return std::min(xz, yz) - xy;
}

void require_in_ball(const Ball& b, const Element& x) {
  if (!b.contains(x)) {
    throw Error(ErrorCode::BallEscape,
                "element \"" + b.model().format(x) + "\" is outside the ball of radius " + std::to_string(b.radius()),
                "ball_radius");
  }
}

}  // namespace

const char* provenance_name(DeltaProvenance p) noexcept {
  switch (p) {
    case DeltaProvenance::FreeGroupDefault: return "free-group-default";
    case DeltaProvenance::EstimatedOnBall: return "estimated-on-ball";
    case DeltaProvenance::UserSupplied: return "user-supplied";
  }
  return "unknown";
}

const char* status_name(CriterionStatus s) noexcept {
  switch (s) {
    case CriterionStatus::HypothesesNotMet: return "hypotheses-not-met";
    case CriterionStatus::Holds: return "holds";
    case CriterionStatus::Violated: return "violated";
  }
  return "unknown";
}

HyperbolicityConstant HyperbolicityConstant::supplied(double delta) {
  if (!(delta >= 1.0)) throw Error(ErrorCode::InvalidArgument, "delta must be >= 1", "delta");
  HyperbolicityConstant h;
  h.delta = delta;
  h.provenance = DeltaProvenance::UserSupplied;
  return h;
}

void ScanReport::record_violation(std::string description) {
  ++violation_count;
  if (violations.size() < kMaxListedViolations) violations.push_back(std::move(description));
}

GromovProduct gromov_product(const Element& x, const Element& y, const Element& z, const Ball& b) {
  require_in_ball(b, x);
  require_in_ball(b, y);
  require_in_ball(b, z);
  const auto& m = b.model();
  return GromovProduct{static_cast<long>(m.distance(x, z)) + m.distance(y, z) - m.distance(x, y)};
}

HyperbolicityConstant estimate_delta_4point(const Ball& b, std::uint64_t seed, std::uint64_t exhaustive_limit,
                                            std::uint64_t samples) {
  HyperbolicityConstant h;
  h.provenance = DeltaProvenance::EstimatedOnBall;
  h.ball_radius = b.radius();
  const std::size_t n = b.size();
  const DistanceMatrix d(b, n);
  const double total = std::pow(static_cast<double>(n), 4.0);
  long best = 0;
  if (total <= static_cast<double>(exhaustive_limit)) {
    h.mode = "exhaustive";
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          for (std::size_t z = 0; z < n; ++z) best = std::max(best, doubled_defect(d, x, y, z, w));
    h.tuples_checked = static_cast<std::uint64_t>(n) * n * n * n;
  } else {
    h.mode = "sampled";
    StreamRng rng(seed, 0x4d, 0);
    for (std::uint64_t k = 0; k < samples; ++k) {
      const auto x = rng.below(n), y = rng.below(n), z = rng.below(n), w = rng.below(n);
      best = std::max(best, doubled_defect(d, x, y, z, w));
    }
    h.tuples_checked = samples;
  }
  h.raw_defect = static_cast<double>(best) / 2.0;
  h.delta = std::max(1.0, h.raw_defect);
  return h;
}

HyperbolicityConstant estimate_delta_basepoint(const Ball& b) {
  HyperbolicityConstant h;
  h.provenance = DeltaProvenance::EstimatedOnBall;
  h.ball_radius = b.radius();
  h.mode = "basepoint";
  const std::size_t n = b.size();
  const DistanceMatrix d(b, n);
  long best = 0;
  // index 0 is the identity
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) best = std::max(best, doubled_defect(d, x, y, z, 0));
  h.tuples_checked = static_cast<std::uint64_t>(n) * n * n;
  h.raw_defect = static_cast<double>(best) / 2.0;
  h.delta = std::max(1.0, std::ceil(h.raw_defect));
  return h;
}

HyperbolicityConstant default_delta(const ModelPtr& model, std::size_t max_ball_size) {
  if (model->kind() == BackendKind::FreeGroup) return HyperbolicityConstant{};
  // distances inside the ball need products of length up to twice the radius
  const int limit = model->validated_radius() ? *model->validated_radius() / 2 : 64;
  BallPtr best = Ball::enumerate(model, 0);
  for (int radius = 1; radius <= limit; ++radius) {
    BallPtr next;
    try {
      next = Ball::enumerate(model, radius, max_ball_size);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::GuardExceeded) break;
      throw;
    }
    const bool saturated = next->size() == best->size();
    best = std::move(next);
    if (saturated) break;
  }
  return estimate_delta_basepoint(*best);
}

Geodesic geodesic_between(const Element& x, const Element& y, const Ball& b) {
  require_in_ball(b, x);
  require_in_ball(b, y);
  const auto& m = b.model();
  const Element label = m.quotient(x, y);
  Geodesic g;
  g.vertices.push_back(x);
  Element cur = x;
  for (Letter l : label.word().span()) {
    const auto i = b.find(cur);
    const auto it = std::find(m.edge_letters().begin(), m.edge_letters().end(), l);
    if (i && it != m.edge_letters().end()) {
      const auto j = b.neighbor(*i, static_cast<std::size_t>(it - m.edge_letters().begin()));
      if (j < 0) {
        throw Error(ErrorCode::BallEscape, "geodesic leaves the ball of radius " + std::to_string(b.radius()),
                    "ball_radius");
      }
      cur = b.element(static_cast<std::size_t>(j));
    } else {
      cur = m.multiply(cur, m.generator(l));
      require_in_ball(b, cur);
    }
    g.vertices.push_back(cur);
  }
  return g;
}

GeodesicDistanceReport check_geodesic_distance_bound(const Element& x, const Element& y, const Element& z,
                                                     const Ball& b, const HyperbolicityConstant& delta) {
  const Geodesic g = geodesic_between(x, y, b);
  require_in_ball(b, z);
  GeodesicDistanceReport r;
  r.product = gromov_product(x, y, z, b);
  int best = -1;
  for (const Element& v : g.vertices) {
    const int d = b.model().distance(z, v);
    if (best < 0 || d < best) best = d;
  }
  r.distance_to_geodesic = best;
  r.left_slack = best - r.product.value();
  r.right_slack = r.product.value() + delta.delta - best;
  return r;
}

ConcatenationReport check_concatenation_criterion(const Element& x, const Element& y, const Element& z,
                                                  const Element& w, double alpha,
                                                  const HyperbolicityConstant& delta, const Ball& b) {
  for (const Element* e : {&x, &y, &z, &w}) require_in_ball(b, *e);
  const auto& m = b.model();
  ConcatenationReport r;
  const double xz_y = gromov_product(x, z, y, b).value();
  const double yw_z = gromov_product(y, w, z, b).value();
  const double dyz = m.distance(y, z);
  if (!(xz_y <= alpha && yw_z <= alpha && dyz > 2 * alpha + delta.delta)) return r;
  r.lhs = m.distance(x, y) + dyz + m.distance(z, w);
  r.rhs = m.distance(x, w) + 4 * alpha + 2 * delta.delta;
  r.slack = r.rhs - r.lhs;
  r.status = r.slack >= 0 ? CriterionStatus::Holds : CriterionStatus::Violated;
  return r;
}

ScanReport scan_four_point(const Ball& b, std::uint64_t seed) {
  ScanReport report;
  report.check = "four-point";
  report.ball_radius = b.radius();
  const auto h = estimate_delta_4point(b, seed);
  report.mode = h.mode;
  report.tuples_checked = h.tuples_checked;
  report.hypotheses_met = h.tuples_checked;
  report.max_defect = h.raw_defect;
  return report;
}

ScanReport scan_concatenation(const Ball& b, const std::vector<double>& alphas, const HyperbolicityConstant& delta) {
  ScanReport report;
  report.check = "concatenation";
  report.ball_radius = b.radius();
  report.mode = "exhaustive";
  const std::size_t n = b.size();
  const DistanceMatrix d(b, n);
  const auto& m = b.model();
  report.max_defect = -1e300;
  for (double alpha : alphas) {
    const double a2 = 2 * alpha;
    std::vector<std::size_t> xs, ws;
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        const int dyz = d(y, z);
        if (!(dyz > a2 + delta.delta)) continue;
        xs.clear();
        ws.clear();
        // (x,z)_y <= alpha and (y,w)_z <= alpha, doubled
        for (std::size_t x = 0; x < n; ++x) {
          if (d(x, y) + dyz - d(x, z) <= a2) xs.push_back(x);
        }
        for (std::size_t w = 0; w < n; ++w) {
          if (dyz + d(w, z) - d(y, w) <= a2) ws.push_back(w);
        }
        for (std::size_t x : xs) {
          for (std::size_t w : ws) {
            ++report.hypotheses_met;
            const double lhs = d(x, y) + dyz + d(z, w);
            const double rhs = d(x, w) + 4 * alpha + 2 * delta.delta;
            report.max_defect = std::max(report.max_defect, lhs - d(x, w));
            if (lhs > rhs) {
              report.record_violation("x=" + m.format(b.element(x)) + " y=" + m.format(b.element(y)) +
                                      " z=" + m.format(b.element(z)) + " w=" + m.format(b.element(w)) +
                                      " alpha=" + std::to_string(alpha));
            }
          }
        }
      }
    }
    report.tuples_checked += static_cast<std::uint64_t>(n) * n * n * n;
  }
  if (report.hypotheses_met == 0) report.max_defect = 0;
  return report;
}

ScanReport scan_geodesic_distance(const Ball& outer, int inner_radius, const HyperbolicityConstant& delta) {
  ScanReport report;
  report.check = "geodesic-distance";
  report.ball_radius = inner_radius;
  report.mode = "exhaustive";
  const std::size_t n = outer.count_within(inner_radius);
  const auto& m = outer.model();
  const DistanceMatrix d(outer, n);
  // distance from each inner z to each outer vertex, filled lazily per vertex
  std::vector<std::vector<std::uint16_t>> to_vertex(outer.size());
  auto column = [&](std::size_t v) -> const std::vector<std::uint16_t>& {
    auto& col = to_vertex[v];
    if (col.empty()) {
      col.resize(n);
      const Element inv = m.invert(outer.element(v));
      for (std::size_t z = 0; z < n; ++z) {
        col[z] = static_cast<std::uint16_t>(m.word_length(m.multiply(inv, outer.element(z))));
      }
    }
    return col;
  };
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const Geodesic g = geodesic_between(outer.element(x), outer.element(y), outer);
      std::vector<std::size_t> vertex_index;
      vertex_index.reserve(g.vertices.size());
      for (const Element& v : g.vertices) vertex_index.push_back(outer.index_of(v));
      for (std::size_t z = 0; z < n; ++z) {
        int best = 1 << 30;
        for (std::size_t v : vertex_index) best = std::min<int>(best, column(v)[z]);
        const double product = (d(x, z) + d(y, z) - d(x, y)) / 2.0;
        ++report.tuples_checked;
        ++report.hypotheses_met;
        report.max_defect = std::max(report.max_defect, best - product);
        if (best < product || best > product + delta.delta) {
          report.record_violation("x=" + m.format(outer.element(x)) + " y=" + m.format(outer.element(y)) +
                                  " z=" + m.format(outer.element(z)));
        }
      }
    }
  }
  return report;
}

}  // namespace hyperwalk
