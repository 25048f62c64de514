#include "hyperwalk/coupling.hpp"

#include <cmath>

#include "hyperwalk/error.hpp"
#include "hyperwalk/sampling.hpp"

namespace hyperwalk {

int compute_a0(int K, int n, double delta) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "a0 needs n >= 1 (log n)", "n");
  if (K < 0) throw Error(ErrorCode::InvalidArgument, "K must be >= 0", "K");
  return static_cast<int>(std::floor(K / 2.0 + delta * (std::log(static_cast<double>(n)) + 1.0)));
}

CoupledWalkTrace simulate_coupled_walk(const StepMeasure& mu, const Element& h1, int a0, int n, std::uint64_t seed,
                                       std::uint64_t path_index) {
  if (a0 < 0) throw Error(ErrorCode::InvalidArgument, "a0 must be >= 0", "a0");
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 0", "n");
  const auto& model = mu.model();
  const StepSampler sampler(mu);
  // independent streams for the walk and its copy
  StreamRng rng(seed, 2 * (path_index / kShardSize), path_index);
  StreamRng copy_rng(seed, 2 * (path_index / kShardSize) + 1, path_index);

  CoupledWalkTrace t;
  t.h1 = h1;
  t.a0 = a0;
  t.n = n;
  t.primary = sample_path(mu, sampler, n, rng);
  t.copy = sample_path(mu, sampler, 2 * a0, copy_rng);
  for (int i = 0; i <= n; ++i) {
    if (model.distance(t.primary[static_cast<std::size_t>(i)], h1) <= a0) {
      t.T = i;
      break;
    }
  }

  t.spliced.reserve(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) {
    if (!t.T || m <= *t.T) {
      t.spliced.push_back(t.primary[static_cast<std::size_t>(m)]);
      continue;
    }
    const int T = *t.T;
    const Element& gT = t.primary[static_cast<std::size_t>(T)];
    if (m <= T + 2 * a0) {
      t.spliced.push_back(model.multiply(gT, t.copy[static_cast<std::size_t>(m - T)]));
    } else {
      const Element loop = model.multiply(gT, model.multiply(t.copy.back(), model.invert(gT)));
      t.spliced.push_back(model.multiply(loop, t.primary[static_cast<std::size_t>(m - 2 * a0)]));
    }
  }

  if (t.T) {
    const Element& gT = t.primary[static_cast<std::size_t>(*t.T)];
    t.event_A = t.copy.back().is_identity() &&
                t.copy[static_cast<std::size_t>(a0)] == model.quotient(gT, h1);
  }
  t.valid_path = t.spliced.front().is_identity();
  for (std::size_t m = 1; m < t.spliced.size() && t.valid_path; ++m) {
    t.valid_path = mu.weight_of(model.quotient(t.spliced[m - 1], t.spliced[m])) > 0;
  }
  return t;
}

SplittingReport verify_splitting_inequality(const StepMeasure& mu, const PointProbabilities& probs, const Element& h1,
                                            const Element& h2, int K, int n, double delta) {
  const auto& model = mu.model();
  const Element x = model.multiply(h1, h2);
  const int defect = h1.length() + h2.length() - x.length();
  if (defect > K) {
    throw Error(ErrorCode::BoundViolation,
                "precondition |h1| + |h2| <= |h1 h2| + K fails: defect " + std::to_string(defect) + " > K = " +
                    std::to_string(K),
                "K");
  }
  SplittingReport r;
  r.h1 = model.format(h1);
  r.h2 = model.format(h2);
  r.K = K;
  r.n = n;
  r.delta = delta;
  r.a0 = compute_a0(K, n, delta);
  r.c = mu.min_weight();
  const int total = n + 2 * r.a0;
  if (total > probs.reach()) {
    throw Error(ErrorCode::GuardExceeded,
                "splitting check needs laws to n + 2 a0 = " + std::to_string(total) + ", beyond reach " +
                    std::to_string(probs.reach()),
                "n");
  }
  // Common denominator D^{n + 2a0} on both sides.
  const auto two_a0 = static_cast<unsigned long>(2 * r.a0);
  const BigInt& D = probs.denominator();
  BigInt lhs = pow(BigInt(r.c.get_num()), two_a0) * probs.numerator(n, x) * pow(D, two_a0);
  BigInt rhs = 0;
  for (int k = 0; k <= total; ++k) {
    const BigInt a = probs.numerator(k, h1);
    if (a == 0) continue;
    rhs += a * probs.numerator(total - k, h2);
  }
  const BigInt c_den = pow(BigInt(r.c.get_den()), two_a0);
  const BigInt scale = pow(D, static_cast<unsigned long>(total));
  r.lhs = Rational(lhs, c_den * scale);
  r.lhs.canonicalize();
  r.rhs = Rational(rhs, scale);
  r.rhs.canonicalize();
  return r;
}

ScanReport sweep_splitting_inequality(const StepMeasure& mu, int radius, int K_max, int n_max, double delta,
                                      std::size_t guard) {
  ScanReport rep;
  rep.check = "splitting-inequality";
  rep.ball_radius = radius;
  rep.mode = "exhaustive";
  int reach_needed = 0;
  for (int n = 1; n <= n_max; ++n) reach_needed = std::max(reach_needed, n + 2 * compute_a0(K_max, n, delta));
  const int half = (reach_needed + 1) / 2;
  const PointProbabilities probs(mu, std::max(half, 1), guard);
  const auto ball = Ball::enumerate(mu.model_ptr(), radius, guard);
  const auto& model = mu.model();
  double worst = 0.0;
  for (const auto& h1 : ball->elements()) {
    for (const auto& h2 : ball->elements()) {
      const int defect = h1.length() + h2.length() - model.multiply(h1, h2).length();
      for (int K = defect; K <= K_max; ++K) {
        for (int n = 1; n <= n_max; ++n) {
          ++rep.tuples_checked;
          const auto r = verify_splitting_inequality(mu, probs, h1, h2, K, n, delta);
          if (r.lhs == 0) continue;
          ++rep.hypotheses_met;
          if (!r.holds()) {
            rep.record_violation("h1=" + r.h1 + " h2=" + r.h2 + " K=" + std::to_string(K) + " n=" +
                                 std::to_string(n) + " lhs=" + to_string(r.lhs) + " rhs=" + to_string(r.rhs));
          }
          // largest lhs/rhs ratio seen
          worst = std::max(worst, Rational(r.lhs / r.rhs).get_d());
        }
      }
    }
  }
  rep.max_defect = worst;
  return rep;
}

}  // namespace hyperwalk
