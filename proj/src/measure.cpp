#include "hyperwalk/measure.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "hyperwalk/ball.hpp"
#include "hyperwalk/error.hpp"

namespace hyperwalk {

namespace {

constexpr int kGenerationCheckRadius = 3;

[[noreturn]] void violated(MeasureViolation v, const std::string& message) {
  throw Error(ErrorCode::InvalidMeasure, message, violation_name(v));
}

}  // namespace

const char* violation_name(MeasureViolation v) noexcept {
  switch (v) {
    case MeasureViolation::NonPositiveWeight: return "positive_weights";
    case MeasureViolation::DuplicateAtom: return "distinct_atoms";
    case MeasureViolation::TotalNotOne: return "total_mass_one";
    case MeasureViolation::NonSymmetric: return "symmetric";
    case MeasureViolation::ZeroIdentityMass: return "identity_in_support";
    case MeasureViolation::NonGenerating: return "generating_support";
  }
  return "unknown";
}

StepMeasure::StepMeasure(ModelPtr model, std::vector<Atom> atoms) : model_(std::move(model)), atoms_(std::move(atoms)) {
  if (atoms_.empty()) violated(MeasureViolation::TotalNotOne, "measure has no atoms");
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.element < b.element; });
  Rational total = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    auto& a = atoms_[i];
    if (a.element.model_id() != model_->id()) {
      throw Error(ErrorCode::BackendMismatch, "measure atom belongs to another group model");
    }
    a.weight.canonicalize();
    if (a.weight <= 0) {
      violated(MeasureViolation::NonPositiveWeight, "weight of " + model_->format(a.element) + " is not positive");
    }
    if (i > 0 && atoms_[i - 1].element == a.element) {
      violated(MeasureViolation::DuplicateAtom, "atom " + model_->format(a.element) + " listed twice");
    }
    total += a.weight;
    max_step_length_ = std::max(max_step_length_, a.element.length());
  }
  if (total != 1) violated(MeasureViolation::TotalNotOne, "weights sum to " + to_string(total) + ", not 1");
  min_weight_ = atoms_.front().weight;
  denominator_ = 1;
  for (const auto& a : atoms_) {
    min_weight_ = std::min(min_weight_, a.weight);
    mpz_lcm(denominator_.get_mpz_t(), denominator_.get_mpz_t(), a.weight.get_den_mpz_t());
  }
  for (const auto& a : atoms_) {
    BigInt num = a.weight.get_num() * (denominator_ / a.weight.get_den());
    numerators_.push_back(num);
  }
}

StepMeasure StepMeasure::unchecked(ModelPtr model, std::vector<Atom> atoms) {
  return StepMeasure(std::move(model), std::move(atoms));
}

StepMeasure StepMeasure::validate(ModelPtr model, std::vector<Atom> atoms) {
  StepMeasure mu(std::move(model), std::move(atoms));
  const auto& m = *mu.model_;
  for (const auto& a : mu.atoms_) {
    const Rational back = mu.weight_of(m.invert(a.element));
    if (back != a.weight) {
      violated(MeasureViolation::NonSymmetric, "mu(" + m.format(a.element) + ") = " + to_string(a.weight) +
                                                   " but mu(" + m.format(m.invert(a.element)) + ") = " +
                                                   to_string(back));
    }
  }
  if (mu.weight_of(m.identity()) == 0) violated(MeasureViolation::ZeroIdentityMass, "mu(e) = 0");

  // every element of the radius-3 ball must be reachable by S-steps
  int region = kGenerationCheckRadius + 2 * mu.max_step_length_;
  int target = kGenerationCheckRadius;
  if (auto limit = m.validated_radius()) {
    region = std::min(region, *limit);
    target = std::min(target, region);
  }
  auto ball = Ball::enumerate(mu.model_, region);
  const auto steps = mu.support();
  const auto table = ball->right_table(steps, region);
  std::vector<char> seen(ball->size(), 0);
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < steps.size(); ++j) {
      const auto k = table[i * steps.size() + j];
      if (k >= 0 && !seen[static_cast<std::size_t>(k)]) {
        seen[static_cast<std::size_t>(k)] = 1;
        queue.push_back(static_cast<std::size_t>(k));
      }
    }
  }
  for (std::size_t i = 0; i < ball->count_within(target); ++i) {
    if (!seen[i]) {
      violated(MeasureViolation::NonGenerating,
               "support does not reach " + m.format(ball->element(i)) + " (support must generate the group)");
    }
  }
  return mu;
}

StepMeasure StepMeasure::lazy_uniform(ModelPtr model, const Rational& alpha) {
  if (alpha <= 0 || alpha >= 1) {
    throw Error(ErrorCode::InvalidMeasure, "laziness must lie strictly between 0 and 1",
                violation_name(MeasureViolation::ZeroIdentityMass));
  }
  std::vector<Atom> atoms;
  atoms.push_back({model->identity(), alpha});
  const auto& letters = model->edge_letters();
  const Rational each = (Rational(1) - alpha) / static_cast<long>(letters.size());
  for (Letter l : letters) atoms.push_back({model->generator(l), each});
  return validate(std::move(model), std::move(atoms));
}

StepMeasure StepMeasure::parse(ModelPtr model, std::string_view spec) {
  const auto colon = spec.find(':');
  const auto kind = spec.substr(0, colon);
  const auto args = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (kind == "lazy-uniform") {
    return lazy_uniform(std::move(model), parse_rational(args.empty() ? std::string_view("1/5") : args));
  }
  if (kind == "weights") {
    std::vector<Atom> atoms;
    std::size_t start = 0;
    while (start <= args.size()) {
      auto end = args.find(',', start);
      if (end == std::string_view::npos) end = args.size();
      const auto item = args.substr(start, end - start);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw Error(ErrorCode::Parse, "weight entries look like word=p/q, got \"" + std::string(item) + "\"",
                    "measure");
      }
      atoms.push_back({model->parse(item.substr(0, eq)), parse_rational(item.substr(eq + 1))});
      start = end + 1;
    }
    return validate(std::move(model), std::move(atoms));
  }
  throw Error(ErrorCode::Parse, "unknown measure kind \"" + std::string(kind) + "\"", "measure");
}

std::vector<Element> StepMeasure::support() const {
  std::vector<Element> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.element);
  return out;
}

Rational StepMeasure::weight_of(const Element& x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, const Element& e) { return a.element < e; });
  if (it != atoms_.end() && it->element == x) return it->weight;
  return 0;
}

bool StepMeasure::is_symmetric() const {
  for (const auto& a : atoms_) {
    if (weight_of(model_->invert(a.element)) != a.weight) return false;
  }
  return true;
}

std::optional<Rational> StepMeasure::free_lazy_uniform_alpha() const {
  if (model_->kind() != BackendKind::FreeGroup) return std::nullopt;
  const auto& letters = model_->edge_letters();
  if (atoms_.size() != letters.size() + 1 || !atoms_.front().element.is_identity()) return std::nullopt;
  const Rational& step = atoms_[1].weight;
  for (std::size_t i = 1; i < atoms_.size(); ++i) {
    if (atoms_[i].element.length() != 1 || atoms_[i].weight != step) return std::nullopt;
  }
  return atoms_.front().weight;
}

std::string StepMeasure::describe() const {
  std::string out = "weights:";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) out += ",";
    out += model_->format(atoms_[i].element) + "=" + to_string(atoms_[i].weight);
  }
  return out;
}

}  // namespace hyperwalk
