#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hyperwalk/ball.hpp"
#include "hyperwalk/measure.hpp"
#include "hyperwalk/rational.hpp"

namespace hyperwalk {

enum class Arithmetic { Exact, Float };

const char* arithmetic_name(Arithmetic a) noexcept;
Arithmetic parse_arithmetic(std::string_view text);

/// Law of g_n, stored densely over the first extent() elements of a ball.
/// Exact mode keeps integer numerators over the common denominator D^n.
class Distribution {
 public:
  Distribution(BallPtr ball, int step, Arithmetic mode, std::size_t extent);

  const Ball& ball() const noexcept { return *ball_; }
  const BallPtr& ball_ptr() const noexcept { return ball_; }
  int step() const noexcept { return step_; }
  Arithmetic mode() const noexcept { return mode_; }
  std::size_t extent() const noexcept { return extent_; }

  Rational probability(std::size_t i) const;
  /// 0 outside the stored range.
  Rational probability(const Element& x) const;
  double probability_double(std::size_t i) const;
  double probability_double(const Element& x) const;

  const BigInt& numerator(std::size_t i) const { return numerators_[i]; }
  const BigInt& denominator() const noexcept { return denominator_; }
  double mass(std::size_t i) const { return masses_[i]; }

  Rational total_mass() const;
  double total_mass_double() const;
  std::size_t support_size() const;

  /// Rows sorted shortlex: "word,probability_numerator,probability_denominator"
  /// (exact) or "word,probability" (float); only the support is listed.
  std::string to_csv() const;

 private:
  friend class LawStepper;

  BallPtr ball_;
  int step_;
  Arithmetic mode_;
  std::size_t extent_;
  std::vector<BigInt> numerators_;
  BigInt denominator_;
  std::vector<double> masses_;
};

/// Computes the laws of g_0, g_1, ... by repeated sparse convolution on one
/// ball of radius n_max * max_step_length.
class LawStepper {
 public:
  LawStepper(const StepMeasure& mu, int n_max, Arithmetic mode, std::size_t guard = kDefaultSupportGuard);

  const Distribution& current() const noexcept { return current_; }
  int step() const noexcept { return current_.step(); }
  /// Moves to the next law; throws InvalidArgument past n_max.
  void advance();
  const BallPtr& ball_ptr() const noexcept { return ball_; }

 private:
  const StepMeasure* mu_;
  int n_max_;
  BallPtr ball_;
  std::vector<std::int32_t> table_;
  std::vector<double> weights_;
  Distribution current_;
};

/// Laws of g_0..g_{n_max}, all kept.
class WalkLaws {
 public:
  WalkLaws(const StepMeasure& mu, int n_max, Arithmetic mode, std::size_t guard = kDefaultSupportGuard);

  const Distribution& law(int n) const { return laws_.at(static_cast<std::size_t>(n)); }
  int n_max() const noexcept { return static_cast<int>(laws_.size()) - 1; }
  const Ball& ball() const { return laws_.front().ball(); }
  const BallPtr& ball_ptr() const { return laws_.front().ball_ptr(); }

 private:
  std::vector<Distribution> laws_;
};

/// Exact n-fold convolution power of mu.
Distribution n_step_distribution(const StepMeasure& mu, int n, Arithmetic mode,
                                 std::size_t guard = kDefaultSupportGuard);

/// Exact point probabilities P(g_n = h) for n up to twice the number of
/// stored laws, by splitting g_n = g_a (g_a^-1 g_n) at a = min(n, n_max):
/// P(g_n = h) = sum_y P(g_a = y) P(g_{n-a} = y^-1 h).
class PointProbabilities {
 public:
  PointProbabilities(const StepMeasure& mu, int n_max, std::size_t guard = kDefaultSupportGuard);

  /// Numerator of P(g_n = h) over denominator()^n.
  BigInt numerator(int n, const Element& h) const;
  Rational probability(int n, const Element& h) const;
  const BigInt& denominator() const noexcept { return mu_denominator_; }
  int reach() const noexcept { return 2 * laws_.n_max(); }
  const WalkLaws& laws() const noexcept { return laws_; }

 private:
  WalkLaws laws_;
  BigInt mu_denominator_;
  int max_step_length_;
  mutable std::map<std::pair<int, Word>, BigInt> cache_;
};

}  // namespace hyperwalk
