#include "hyperwalk/distribution.hpp"

#include <cstdio>
#include <sstream>

#include "hyperwalk/error.hpp"

namespace hyperwalk {

const char* arithmetic_name(Arithmetic a) noexcept { return a == Arithmetic::Exact ? "exact" : "float"; }

Arithmetic parse_arithmetic(std::string_view text) {
  if (text == "exact") return Arithmetic::Exact;
  if (text == "float") return Arithmetic::Float;
  throw Error(ErrorCode::Parse, "arithmetic mode must be exact or float, got \"" + std::string(text) + "\"", "mode");
}

Distribution::Distribution(BallPtr ball, int step, Arithmetic mode, std::size_t extent)
    : ball_(std::move(ball)), step_(step), mode_(mode), extent_(extent), denominator_(1) {
  if (mode_ == Arithmetic::Exact) {
    numerators_.resize(extent_);
  } else {
    masses_.assign(extent_, 0.0);
  }
}

Rational Distribution::probability(std::size_t i) const {
  if (i >= extent_) return 0;
  if (mode_ == Arithmetic::Float) {
    Rational q(masses_[i]);
    return q;
  }
  Rational q(numerators_[i], denominator_);
  q.canonicalize();
  return q;
}

Rational Distribution::probability(const Element& x) const {
  if (auto i = ball_->find(x)) return probability(*i);
  return 0;
}

double Distribution::probability_double(std::size_t i) const {
  if (i >= extent_) return 0.0;
  if (mode_ == Arithmetic::Float) return masses_[i];
  return static_cast<double>(to_long_double(Rational(numerators_[i], denominator_)));
}

double Distribution::probability_double(const Element& x) const {
  if (auto i = ball_->find(x)) return probability_double(*i);
  return 0.0;
}

Rational Distribution::total_mass() const {
  if (mode_ == Arithmetic::Float) return Rational(total_mass_double());
  BigInt sum = 0;
  for (const auto& z : numerators_) sum += z;
  Rational q(sum, denominator_);
  q.canonicalize();
  return q;
}

double Distribution::total_mass_double() const {
  if (mode_ == Arithmetic::Exact) return total_mass().get_d();
  double sum = 0.0;
  for (double m : masses_) sum += m;
  return sum;
}

std::size_t Distribution::support_size() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < extent_; ++i) {
    if (mode_ == Arithmetic::Exact ? numerators_[i] != 0 : masses_[i] != 0.0) ++count;
  }
  return count;
}

std::string Distribution::to_csv() const {
  std::ostringstream out;
  const auto& m = ball_->model();
  if (mode_ == Arithmetic::Exact) {
    out << "word,probability_numerator,probability_denominator\n";
    for (std::size_t i = 0; i < extent_; ++i) {
      if (numerators_[i] == 0) continue;
      Rational q(numerators_[i], denominator_);
      q.canonicalize();
      out << m.format(ball_->element(i)) << ',' << q.get_num().get_str() << ',' << q.get_den().get_str() << '\n';
    }
  } else {
    out << "word,probability\n";
    char buf[64];
    for (std::size_t i = 0; i < extent_; ++i) {
      if (masses_[i] == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.17g", masses_[i]);
      out << m.format(ball_->element(i)) << ',' << buf << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------

LawStepper::LawStepper(const StepMeasure& mu, int n_max, Arithmetic mode, std::size_t guard)
    : mu_(&mu),
      n_max_(n_max),
      ball_(Ball::enumerate(mu.model_ptr(), std::max(0, n_max) * mu.max_step_length(), guard)),
      current_(ball_, 0, mode, 1) {
  if (n_max < 0) throw Error(ErrorCode::InvalidArgument, "number of steps must be >= 0", "n");
  const auto steps = mu.support();
  table_ = ball_->right_table(steps, std::max(0, n_max - 1) * mu.max_step_length());
  for (const auto& a : mu.atoms()) weights_.push_back(a.weight.get_d());
  if (mode == Arithmetic::Exact) {
    current_.numerators_[0] = 1;
  } else {
    current_.masses_[0] = 1.0;
  }
}

void LawStepper::advance() {
  const int n = current_.step() + 1;
  if (n > n_max_) throw Error(ErrorCode::InvalidArgument, "stepper exhausted at n = " + std::to_string(n_max_), "n");
  const std::size_t s = weights_.size();
  Distribution next(ball_, n, current_.mode(), ball_->count_within(n * mu_->max_step_length()));
  const auto& nums = mu_->numerators();
  for (std::size_t i = 0; i < current_.extent(); ++i) {
    if (current_.mode() == Arithmetic::Exact) {
      const BigInt& p = current_.numerators_[i];
      if (p == 0) continue;
      for (std::size_t j = 0; j < s; ++j) {
        const auto k = table_[i * s + j];
        if (k < 0) throw Error(ErrorCode::BallEscape, "walk left the enumerated ball", "ball_radius");
        mpz_addmul(next.numerators_[static_cast<std::size_t>(k)].get_mpz_t(), p.get_mpz_t(), nums[j].get_mpz_t());
      }
    } else {
      const double p = current_.masses_[i];
      if (p == 0.0) continue;
      for (std::size_t j = 0; j < s; ++j) {
        const auto k = table_[i * s + j];
        if (k < 0) throw Error(ErrorCode::BallEscape, "walk left the enumerated ball", "ball_radius");
        next.masses_[static_cast<std::size_t>(k)] += p * weights_[j];
      }
    }
  }
  if (current_.mode() == Arithmetic::Exact) next.denominator_ = current_.denominator_ * mu_->denominator();
  current_ = std::move(next);
}

WalkLaws::WalkLaws(const StepMeasure& mu, int n_max, Arithmetic mode, std::size_t guard) {
  LawStepper stepper(mu, n_max, mode, guard);
  laws_.push_back(stepper.current());
  for (int n = 1; n <= n_max; ++n) {
    stepper.advance();
    laws_.push_back(stepper.current());
  }
}

Distribution n_step_distribution(const StepMeasure& mu, int n, Arithmetic mode, std::size_t guard) {
  LawStepper stepper(mu, n, mode, guard);
  for (int k = 0; k < n; ++k) stepper.advance();
  return stepper.current();
}

// ---------------------------------------------------------------------------

PointProbabilities::PointProbabilities(const StepMeasure& mu, int n_max, std::size_t guard)
    : laws_(mu, n_max, Arithmetic::Exact, guard),
      mu_denominator_(mu.denominator()),
      max_step_length_(mu.max_step_length()) {}

BigInt PointProbabilities::numerator(int n, const Element& h) const {
  if (n < 0 || n > reach()) {
    throw Error(ErrorCode::GuardExceeded,
                "point probability at n = " + std::to_string(n) + " is beyond the exact reach " +
                    std::to_string(reach()),
                "n");
  }
  const auto key = std::make_pair(n, h.word());
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  const Ball& ball = laws_.ball();
  BigInt result = 0;
  const int m = laws_.n_max();
  if (n <= m) {
    const auto& law = laws_.law(n);
    if (auto i = ball.find(h); i && *i < law.extent()) result = law.numerator(*i);
  } else if (h.length() <= n * max_step_length_) {
    const auto& first = laws_.law(m);
    const auto& second = laws_.law(n - m);
    const auto& model = ball.model();
    for (std::size_t i = 0; i < first.extent(); ++i) {
      const BigInt& a = first.numerator(i);
      if (a == 0) continue;
      Element rest;
      try {
        rest = model.quotient(ball.element(i), h);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::BallEscape) continue;  // too long to be reached
        throw;
      }
      if (rest.length() > (n - m) * max_step_length_) continue;
      if (auto j = ball.find(rest); j && *j < second.extent()) {
        mpz_addmul(result.get_mpz_t(), a.get_mpz_t(), second.numerator(*j).get_mpz_t());
      }
    }
  }
  cache_.emplace(key, result);
  return result;
}

Rational PointProbabilities::probability(int n, const Element& h) const {
  Rational q(numerator(n, h), pow(mu_denominator_, static_cast<unsigned long>(n)));
  q.canonicalize();
  return q;
}

}  // namespace hyperwalk
