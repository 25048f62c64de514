#include "hyperwalk/spectral.hpp"

#include <cmath>

#include "hyperwalk/error.hpp"

namespace hyperwalk {

const char* rho_method_name(RhoMethod m) noexcept {
  switch (m) {
    case RhoMethod::ClosedForm: return "closed-form";
    case RhoMethod::ReturnProbability: return "return-probability";
    case RhoMethod::RayleighBall: return "rayleigh-ball";
    case RhoMethod::Supplied: return "supplied";
  }
  return "unknown";
}

SpectralRadiusEstimate rho_closed_form_free(int rank, double alpha) {
  if (rank < 1) throw Error(ErrorCode::InvalidArgument, "rank must be >= 1", "rank");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "laziness must lie in [0, 1)", "alpha");
  SpectralRadiusEstimate r;
  r.value = alpha + (1.0 - alpha) * std::sqrt(2.0 * rank - 1.0) / rank;
  r.method = RhoMethod::ClosedForm;
  return r;
}

SpectralRadiusEstimate rho_closed_form_free(const StepMeasure& mu) {
  auto alpha = mu.free_lazy_uniform_alpha();
  if (!alpha) {
    throw Error(ErrorCode::Unsupported,
                "closed-form spectral radius needs a lazy walk with uniform weights on the free generators",
                "measure");
  }
  return rho_closed_form_free(mu.model().rank(), alpha->get_d());
}

std::vector<std::vector<Rational>> radial_laws(int rank, const Rational& alpha, int n_max) {
  const Rational move = Rational(1) - alpha;
  const Rational down = move / (2 * rank);
  const Rational up = move * (2 * rank - 1) / (2 * rank);
  std::vector<std::vector<Rational>> laws;
  laws.push_back({Rational(1)});
  for (int n = 1; n <= n_max; ++n) {
    const auto& cur = laws.back();
    std::vector<Rational> next(cur.size() + 1);
    for (std::size_t r = 0; r < cur.size(); ++r) {
      if (cur[r] == 0) continue;
      next[r] += cur[r] * alpha;
      if (r == 0) {
        next[1] += cur[r] * move;
      } else {
        next[r - 1] += cur[r] * down;
        next[r + 1] += cur[r] * up;
      }
    }
    laws.push_back(std::move(next));
  }
  return laws;
}

std::vector<Rational> return_probabilities(const StepMeasure& mu, int half_max, std::size_t guard) {
  if (half_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1", "n_max");
  std::vector<Rational> out;
  if (auto alpha = mu.free_lazy_uniform_alpha()) {
    const auto laws = radial_laws(mu.model().rank(), *alpha, 2 * half_max);
    for (int m = 1; m <= half_max; ++m) out.push_back(laws[static_cast<std::size_t>(2 * m)][0]);
    return out;
  }
  const WalkLaws laws(mu, half_max, Arithmetic::Exact, guard);
  const Ball& ball = laws.ball();
  const auto& model = mu.model();
  for (int m = 1; m <= half_max; ++m) {
    const auto& law = laws.law(m);
    BigInt sum = 0;
    for (std::size_t i = 0; i < law.extent(); ++i) {
      if (law.numerator(i) == 0) continue;
      auto j = ball.find(model.invert(ball.element(i)));
      if (j && *j < law.extent()) sum += law.numerator(i) * law.numerator(*j);
    }
    Rational q(sum, law.denominator() * law.denominator());
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

SpectralRadiusEstimate rho_from_returns(const StepMeasure& mu, int half_max, std::size_t guard) {
  const auto returns = return_probabilities(mu, half_max, guard);
  SpectralRadiusEstimate r;
  r.method = RhoMethod::ReturnProbability;
  r.is_lower_bound = true;
  r.parameter = half_max;
  r.value = 0.0;
  for (std::size_t m = 0; m < returns.size(); ++m) {
    const long double p = to_long_double(returns[m]);
    r.value = std::max(r.value, static_cast<double>(std::pow(p, 1.0L / (2.0L * static_cast<long double>(m + 1)))));
  }
  return r;
}

SpectralRadiusEstimate rho_rayleigh_ball(const StepMeasure& mu, int radius, double tolerance, int max_iterations) {
  if (radius < 0) throw Error(ErrorCode::InvalidArgument, "radius must be >= 0", "radius");
  const auto ball = Ball::enumerate(mu.model_ptr(), radius);
  const auto steps = mu.support();
  const auto table = ball->right_table(steps, radius);
  std::vector<double> w;
  for (const auto& a : mu.atoms()) w.push_back(a.weight.get_d());

  const std::size_t size = ball->size();
  const std::size_t s = steps.size();
  std::vector<double> v(size, 1.0 / std::sqrt(static_cast<double>(size)));
  std::vector<double> av(size);
  double previous = -1.0;
  double quotient = 0.0;
  int iteration = 0;
  while (iteration < max_iterations) {
    ++iteration;
    for (std::size_t i = 0; i < size; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < s; ++j) {
        const auto k = table[i * s + j];
        if (k >= 0) acc += w[j] * v[static_cast<std::size_t>(k)];
      }
      av[i] = acc;
    }
    double num = 0.0, den = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      num += v[i] * av[i];
      den += v[i] * v[i];
      norm += av[i] * av[i];
    }
    quotient = num / den;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    for (std::size_t i = 0; i < size; ++i) v[i] = av[i] / norm;
    if (std::abs(quotient - previous) < tolerance) break;
    previous = quotient;
  }
  SpectralRadiusEstimate r;
  r.value = quotient;
  r.method = RhoMethod::RayleighBall;
  r.is_lower_bound = true;
  r.parameter = radius;
  r.iterations = iteration;
  return r;
}

PointwiseBoundReport check_pointwise_bound(const Distribution& law, const SpectralRadiusEstimate& rho) {
  PointwiseBoundReport rep;
  rep.n = law.step();
  rep.rho = rho.value;
  rep.rho_is_lower_bound = rho.is_lower_bound;
  if (rho.is_lower_bound) {
    rep.warning = "rho is a lower-bound estimate; a violation would not contradict the bound";
  }
  rep.bound = std::pow(static_cast<long double>(rho.value), static_cast<long double>(rep.n));
  rep.max_probability = 0;
  const bool exact = law.mode() == Arithmetic::Exact;
  const double den = exact ? law.denominator().get_d() : 1.0;
  const double near = 1.0 - 1e-9;
  double best_approx = 0.0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < law.extent(); ++i) {
    // cheap double screen; exact comparison only near the max or the bound
    const double approx = exact ? law.numerator(i).get_d() / den : law.mass(i);
    if (approx == 0.0) continue;
    const bool near_max = approx >= best_approx * near;
    const bool near_bound = approx >= static_cast<double>(rep.bound) * near;
    if (!near_max && !near_bound) continue;
    const Rational p = law.probability(i);
    if (p > rep.max_probability) {
      rep.max_probability = p;
      best = i;
      best_approx = std::max(best_approx, approx);
    }
    if (near_bound && to_long_double(p) > rep.bound) ++rep.violations;
  }
  rep.argmax = law.ball().model().format(law.ball().element(best));
  return rep;
}

PointwiseBoundReport check_pointwise_bound(const StepMeasure& mu, int n, const SpectralRadiusEstimate& rho) {
  return check_pointwise_bound(n_step_distribution(mu, n, Arithmetic::Exact), rho);
}

}  // namespace hyperwalk
