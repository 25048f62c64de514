#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperwalk/group.hpp"
#include "hyperwalk/rational.hpp"

namespace hyperwalk {

struct Atom {
  Element element;
  Rational weight;
};

/// Hypothesis a step measure can violate.
enum class MeasureViolation {
  NonPositiveWeight,
  DuplicateAtom,
  TotalNotOne,
  NonSymmetric,
  ZeroIdentityMass,
  NonGenerating,
};

const char* violation_name(MeasureViolation v) noexcept;

/// Finitely supported probability measure with exact rational weights.
/// Validated measures are symmetric, charge the identity and generate the
/// group.
class StepMeasure {
 public:
  /// Checks every hypothesis; throws Error(InvalidMeasure) with the violated
  /// hypothesis name as subject.
  static StepMeasure validate(ModelPtr model, std::vector<Atom> atoms);
  /// Skips validation other than positivity and total mass. For negative
  /// controls only.
  static StepMeasure unchecked(ModelPtr model, std::vector<Atom> atoms);
  /// alpha at the identity, the rest spread uniformly over the edge letters.
  static StepMeasure lazy_uniform(ModelPtr model, const Rational& alpha);
  /// "lazy-uniform:ALPHA" or "weights:e=1/5,a=1/5,A=1/5,...".
  static StepMeasure parse(ModelPtr model, std::string_view spec);

  const GroupModel& model() const noexcept { return *model_; }
  const ModelPtr& model_ptr() const noexcept { return model_; }
  /// Atoms in shortlex order of their elements.
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::vector<Element> support() const;

  /// c = min_{s in S} mu(s).
  const Rational& min_weight() const noexcept { return min_weight_; }
  Rational weight_of(const Element& x) const;
  /// Longest support element.
  int max_step_length() const noexcept { return max_step_length_; }
  /// Least common denominator D of the weights; weights are numerators()/D.
  const BigInt& denominator() const noexcept { return denominator_; }
  const std::vector<BigInt>& numerators() const noexcept { return numerators_; }

  bool is_symmetric() const;
  /// If the measure is alpha * delta_e plus uniform on all edge letters of a
  /// free group, returns alpha.
  std::optional<Rational> free_lazy_uniform_alpha() const;
  std::string describe() const;

 private:
  StepMeasure(ModelPtr model, std::vector<Atom> atoms);

  ModelPtr model_;
  std::vector<Atom> atoms_;
  Rational min_weight_;
  int max_step_length_ = 0;
  BigInt denominator_;
  std::vector<BigInt> numerators_;
};

}  // namespace hyperwalk
