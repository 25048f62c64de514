#include "hyperwalk/powers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "hyperwalk/error.hpp"

namespace hyperwalk {

namespace {

const FreeProductModel& free_type(const GroupModel& model, const char* what) {
  const auto* fp = dynamic_cast<const FreeProductModel*>(&model);
  if (fp == nullptr) {
    throw Error(ErrorCode::Unsupported, std::string(what) + " needs a free-type backend", "group");
  }
  return *fp;
}

/// Failure function: period of the sequence (smallest p with s[i] = s[i+p]).
template <typename Seq>
std::size_t smallest_period(const Seq& s) {
  const std::size_t n = s.size();
  if (n == 0) return 0;
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && !(s[i] == s[k])) k = pi[k - 1];
    if (s[i] == s[k]) ++k;
    pi[i] = k;
  }
  return n - pi[n - 1];
}

Word min_rotation(const Word& w) {
  Word best = w;
  for (std::size_t k = 1; k < w.size(); ++k) {
    Word r = w.rotated(k);
    if (r < best) best = std::move(r);
  }
  return best;
}

Element power_word(const FreeProductModel& fp, int generator, int exponent) {
  const FreeProductModel::Syllable s{generator, exponent};
  return Element(fp.word_of(std::span(&s, 1)), fp.id());
}

struct SyllableCore {
  std::vector<FreeProductModel::Syllable> core;
  Element conjugator;
};

SyllableCore reduce_syllables(const Element& x, const FreeProductModel& fp) {
  auto syl = fp.syllables(x.word());
  std::deque<FreeProductModel::Syllable> dq(syl.begin(), syl.end());
  Element conj = fp.identity();
  while (dq.size() >= 2 && dq.front().generator == dq.back().generator) {
    const int g = dq.front().generator;
    const int a = dq.front().exponent;
    const int b = dq.back().exponent;
    const int merged = fp.normalize_exponent(g, static_cast<long>(a) + b);
    // merge only when it shortens the word
    if (std::abs(merged) >= std::abs(a) + std::abs(b)) break;
    dq.pop_front();
    dq.pop_back();
    if (std::abs(b) <= std::abs(a)) {
      // g^a M g^b = g^-b (g^{a+b} M) g^b
      conj = fp.multiply(conj, power_word(fp, g, -b));
      if (merged != 0) dq.push_front({g, merged});
    } else {
      // g^a M g^b = g^a (M g^{a+b}) g^-a
      conj = fp.multiply(conj, power_word(fp, g, a));
      if (merged != 0) dq.push_back({g, merged});
    }
  }
  return {std::vector<FreeProductModel::Syllable>(dq.begin(), dq.end()), conj};
}

Element conjugate(const GroupModel& m, const Element& g, const Element& h) {
  return m.multiply(m.multiply(g, h), m.invert(g));
}

int smallest_coprime_at_least_two(int m) {
  for (int d = 2;; ++d) {
    if (std::gcd(d, m) == 1) return d;
  }
}

int inverse_mod(int a, int m) {
  for (int x = 1; x < m; ++x) {
    if ((static_cast<long>(a) * x) % m == 1) return x;
  }
  return 1;
}

/// Class members reachable by conjugators of length <= (R - |x|)/2.
std::set<Element> ball_class_members(const Element& x, const Ball& ball) {
  const auto& m = ball.model();
  const int R = ball.radius();
  if (3 * x.length() > R) {
    throw Error(ErrorCode::GuardExceeded,
                "conjugacy class search on a ball needs |x| <= R/3 (|x| = " + std::to_string(x.length()) +
                    ", R = " + std::to_string(R) + ")",
                "radius");
  }
  std::set<Element> members;
  const std::size_t count = ball.count_within((R - x.length()) / 2);
  for (std::size_t i = 0; i < count; ++i) members.insert(conjugate(m, ball.element(i), x));
  return members;
}

}  // namespace

CyclicReduction cyclic_reduce(const Element& x, const GroupModel& model) {
  const auto& fp = free_type(model, "cyclic reduction");
  if (fp.kind() == BackendKind::FreeGroup) {
    const Word& w = x.word();
    std::size_t k = 0;
    while (2 * k + 1 < w.size() && w[k] == inverse_letter(w[w.size() - 1 - k])) ++k;
    return {Element(w.substr(k, w.size() - 2 * k), fp.id()), Element(w.substr(0, k), fp.id())};
  }
  auto r = reduce_syllables(x, fp);
  return {Element(fp.word_of(r.core), fp.id()), r.conjugator};
}

Element conjugacy_key(const Element& x, const GroupModel& model) {
  const auto core = cyclic_reduce(x, model).core;
  if (model.kind() == BackendKind::FreeGroup) return Element(min_rotation(core.word()), model.id());
  Element best = core;
  for (std::size_t k = 1; k < core.word().size(); ++k) {
    Element r = model.canonicalize(core.word().rotated(k));
    if (r.length() == core.length() && r < best) best = std::move(r);
  }
  return best;
}

ConjugacyClass conjugacy_class_of(const Element& x, const GroupModel& model, double delta, const Ball* ball) {
  ConjugacyClass C;
  if (model.is_free_type()) {
    const auto& fp = free_type(model, "conjugacy class");
    const auto red = reduce_syllables(x, fp);
    C.representative = conjugacy_key(x, model);
    C.length = C.representative.length();
    C.finite_order = red.core.empty() ||
                     (red.core.size() == 1 && fp.order(red.core.front().generator) != 0);
    std::set<Element> pc;
    pc.insert(C.representative);
    const Word& w = C.representative.word();
    for (std::size_t k = 1; k < w.size(); ++k) pc.insert(model.canonicalize(w.rotated(k)));
    C.cyclic_conjugates.assign(pc.begin(), pc.end());
    return C;
  }
  if (ball == nullptr) throw Error(ErrorCode::InvalidArgument, "ball backends need a ball for class searches", "ball");
  const auto members = ball_class_members(x, *ball);
  C.representative = *members.begin();  // shortlex: shortest first
  C.length = C.representative.length();
  C.finite_order = false;
  for (int d = 2; d <= 2 * ball->radius() + 2; ++d) {
    try {
      const Element p = model.power(C.representative, d);
      if (p.is_identity()) {
        C.finite_order = true;
        break;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BallEscape) throw;
      break;
    }
  }
  if (C.length <= 9.0 * delta) {
    C.small_case = true;
    for (const auto& h : members) {
      if (h.length() <= 9.0 * delta) C.cyclic_conjugates.push_back(h);
    }
  } else {
    std::set<Element> pc;
    const Word& w = C.representative.word();
    for (std::size_t k = 0; k < w.size(); ++k) pc.insert(model.canonicalize(w.rotated(k)));
    C.cyclic_conjugates.assign(pc.begin(), pc.end());
  }
  return C;
}

// ---------------------------------------------------------------------------

Element reassemble(const PowerWitness& w, const GroupModel& model) {
  return conjugate(model, w.conjugator, model.power(w.base, w.exponent));
}

std::optional<PowerWitness> is_proper_power(const Element& x, const GroupModel& model) {
  const auto& fp = free_type(model, "exact proper-power detection");
  const Element e = fp.identity();
  if (x.is_identity()) return PowerWitness{e, 2, e, true};

  if (fp.kind() == BackendKind::FreeGroup) {
    const auto red = cyclic_reduce(x, fp);
    const Word& core = red.core.word();
    const std::size_t p = smallest_period(core.bytes());
    if (p == core.size() || core.size() % p != 0) return std::nullopt;
    const Element root(core.substr(0, p), fp.id());
    return PowerWitness{conjugate(fp, red.conjugator, root), static_cast<int>(core.size() / p), e, false};
  }

  const auto red = reduce_syllables(x, fp);
  const auto& core = red.core;
  if (core.size() == 1) {
    const auto [g, k] = core.front();
    const int m = fp.order(g);
    if (m != 0) {
      // torsion syllable: least d >= 2 coprime to m, then solve j d = k (mod m)
      const int d = smallest_coprime_at_least_two(m);
      const int j = fp.normalize_exponent(g, static_cast<long>(k) * inverse_mod(d % m, m));
      return PowerWitness{conjugate(fp, red.conjugator, power_word(fp, g, j)), d, e, false};
    }
    if (std::abs(k) < 2) return std::nullopt;
    return PowerWitness{conjugate(fp, red.conjugator, power_word(fp, g, k > 0 ? 1 : -1)), std::abs(k), e, false};
  }
  const std::size_t p = smallest_period(core);
  if (p == core.size() || core.size() % p != 0) return std::nullopt;
  const Element root(fp.word_of(std::span(core.data(), p)), fp.id());
  return PowerWitness{conjugate(fp, red.conjugator, root), static_cast<int>(core.size() / p), e, false};
}

PowerDetector::PowerDetector(ModelPtr model, double delta, BallPtr ball)
    : model_(std::move(model)), delta_(delta), ball_(std::move(ball)) {
  if (model_->is_free_type()) return;
  if (!ball_) throw Error(ErrorCode::InvalidArgument, "ball backends need a ball for witness searches", "ball");
  const auto& m = *model_;
  const int cap = 2 * ball_->radius() + 2;
  for (std::uint32_t i = 1; i < ball_->size(); ++i) {
    const Element& h = ball_->element(i);
    Element p = h;
    for (int d = 2; d <= cap; ++d) {
      try {
        p = m.multiply(p, h);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::BallEscape) throw;
        break;
      }
      if (!ball_->contains(p)) break;
      powers_.try_emplace(p.word(), i, d);
      if (p == h) break;  // torsion: h^{d} = h, the cycle has been covered
    }
  }
}

std::optional<PowerWitness> PowerDetector::detect(const Element& x) const {
  if (model_->is_free_type()) return is_proper_power(x, *model_);
  const auto& m = *model_;
  if (x.is_identity()) return PowerWitness{m.identity(), 2, m.identity(), true};
  const int R = ball_->radius();
  if (x.length() > R) return std::nullopt;
  const std::size_t count = ball_->count_within((R - x.length()) / 2);
  for (std::size_t i = 0; i < count; ++i) {
    const Element& g = ball_->element(i);
    const Element y = conjugate(m, m.invert(g), x);
    if (auto it = powers_.find(y.word()); it != powers_.end()) {
      return PowerWitness{ball_->element(it->second.first), it->second.second, g, false};
    }
  }
  return std::nullopt;
}

bool PowerDetector::complete_for(const Element& x) const {
  if (model_->is_free_type()) return true;
  return ball_->radius() >= x.length() + 34.0 * delta_;
}

std::vector<CensusEntry> proper_power_census(const Ball& ball, int inner_radius, double delta) {
  if (inner_radius > ball.radius()) {
    throw Error(ErrorCode::InvalidArgument, "census radius exceeds the ball", "radius");
  }
  BallPtr shared(&ball, [](const Ball*) {});
  const PowerDetector detector(ball.model_ptr(), delta, shared);
  std::vector<CensusEntry> out;
  const std::size_t count = ball.count_within(inner_radius);
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Element& x = ball.element(i);
    auto w = detector.detect(x);
    out.push_back({x, w, w.has_value() || detector.complete_for(x)});
  }
  return out;
}

std::string census_to_csv(const std::vector<CensusEntry>& census, const GroupModel& model) {
  std::ostringstream out;
  out << "word,is_proper_power,witness_base,witness_exponent,witness_conjugator,complete_flag\n";
  for (const auto& c : census) {
    out << model.format(c.element) << ',' << (c.witness ? 1 : 0) << ',';
    if (c.witness) {
      out << model.format(c.witness->base) << ',' << c.witness->exponent << ',' << model.format(c.witness->conjugator);
    } else {
      out << ",,";
    }
    out << ',' << (c.complete ? 1 : 0) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

ConjugateDecomposition decompose_conjugate(const Element& x, const GroupModel& model, double delta, const Ball* ball) {
  const auto C = conjugacy_class_of(x, model, delta, ball);
  std::optional<std::pair<Element, Element>> best;  // (g, h)
  auto consider = [&](const Element& g, const Element& h) {
    if (!best || g.length() < best->first.length() ||
        (g.length() == best->first.length() && std::tie(g, h) < std::tie(best->first, best->second))) {
      best = std::make_pair(g, h);
    }
  };

  if (model.is_free_type()) {
    // x = c core c^-1, core = q h_min q^-1, h_min = r h r^-1
    const auto red = cyclic_reduce(x, model);
    const Word& core = red.core.word();
    const Word& hmin = C.representative.word();
    const std::size_t L = core.size();
    std::vector<Element> qs;
    for (std::size_t j = 0; j < std::max<std::size_t>(L, 1); ++j) {
      if (L != 0 && !(model.canonicalize(core.rotated(j)) == C.representative)) continue;
      qs.push_back(model.canonicalize(core.substr(0, j)));
      qs.push_back(model.canonicalize(core.substr(j).formal_inverse()));
    }
    for (std::size_t k = 0; k < std::max<std::size_t>(L, 1); ++k) {
      const Element h = L == 0 ? C.representative : model.canonicalize(hmin.rotated(k));
      const Element r1 = model.canonicalize(hmin.substr(0, k));
      const Element r2 = model.canonicalize(hmin.substr(k).formal_inverse());
      for (const auto& q : qs) {
        for (const auto* r : {&r1, &r2}) {
          const Element g = model.multiply(model.multiply(red.conjugator, q), *r);
          if (conjugate(model, g, h) == x) consider(g, h);
        }
      }
    }
  } else {
    const int R = ball->radius();
    for (const auto& h : C.cyclic_conjugates) {
      const std::size_t count = ball->count_within(std::max(0, (R - h.length()) / 2));
      for (std::size_t i = 0; i < count; ++i) {
        const Element& g = ball->element(i);
        if (best && g.length() > best->first.length()) break;
        if (conjugate(model, g, h) == x) {
          consider(g, h);
          break;
        }
      }
    }
  }
  if (!best) {
    throw Error(ErrorCode::BoundViolation, "no decomposition x = g h g^-1 with h in P_C found for " + model.format(x),
                "x");
  }
  ConjugateDecomposition d;
  d.x = x;
  d.g = best->first;
  d.h = best->second;
  d.x_length = x.length();
  d.g_length = d.g.length();
  d.h_length = d.h.length();
  d.ledger = 2 * d.g_length + d.h_length;
  d.bound = d.x_length + 14.0 * delta;
  if (d.ledger > d.bound) {
    throw Error(ErrorCode::BoundViolation,
                "|g| + |h| + |g^-1| = " + std::to_string(d.ledger) + " exceeds |x| + 14 delta = " +
                    std::to_string(d.bound) + " for x = " + model.format(x),
                "x");
  }
  return d;
}

const char* decomposition_status_name(DecompositionStatus s) noexcept {
  switch (s) {
    case DecompositionStatus::HypothesisNotMet: return "hypothesis-not-met";
    case DecompositionStatus::Holds: return "holds";
    case DecompositionStatus::Violated: return "violated";
  }
  return "unknown";
}

PowerDecomposition decompose_power(const Element& h, int d, const Element& g, const GroupModel& model, double delta,
                                   const Ball* ball) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "exponent d must be >= 2", "d");
  PowerDecomposition r;
  r.d = d;
  r.class_length = conjugacy_class_of(h, model, delta, ball).length;
  const Element middle = model.power(h, d - 2);
  const Element hd = model.power(h, d);
  r.x = conjugate(model, g, hd);
  r.g_length = g.length();
  r.h_length = h.length();
  r.middle_length = middle.length();
  r.power_length = hd.length();
  r.x_length = r.x.length();
  r.ledger34 = 2 * r.g_length + 2 * r.h_length + r.middle_length;
  r.bound34 = r.x_length + 34.0 * delta;
  r.ledger8 = 2 * r.h_length + r.middle_length;
  r.bound8 = r.power_length + 8.0 * delta;
  if (r.class_length < 16.0 * delta) {
    r.status = DecompositionStatus::HypothesisNotMet;
  } else {
    r.status = r.holds34() && r.holds8() ? DecompositionStatus::Holds : DecompositionStatus::Violated;
  }
  return r;
}

Element sample_cyclically_reduced(const GroupModel& model, int length, StreamRng& rng) {
  if (model.kind() != BackendKind::FreeGroup) {
    throw Error(ErrorCode::Unsupported, "cyclically reduced sampling is implemented for free groups", "group");
  }
  const auto& letters = model.edge_letters();
  const auto k = letters.size();
  if (length <= 0) return model.identity();
  // rejection on the last letter keeps the law uniform over cyclically reduced words
  for (;;) {
    Word w;
    w.push_back(letters[rng.below(k)]);
    for (int i = 1; i < length; ++i) {
      Letter l;
      do {
        l = letters[rng.below(k)];
      } while (l == inverse_letter(w.back()));
      w.push_back(l);
    }
    if (length == 1 || w.back() != inverse_letter(w.front())) return Element(std::move(w), model.id());
  }
}

ScanReport sweep_power_decomposition(const ModelPtr& model, int min_length, int max_length, std::uint64_t samples,
                                     const std::vector<int>& exponents, int g_radius, double delta,
                                     std::uint64_t seed) {
  ScanReport rep;
  rep.check = "power-decomposition";
  rep.ball_radius = g_radius;
  rep.mode = "sampled";
  const auto gball = Ball::enumerate(model, g_radius);
  const auto span = static_cast<std::uint64_t>(max_length - min_length + 1);
  for (std::uint64_t s = 0; s < samples; ++s) {
    StreamRng rng(seed, s / 65536, s);
    const int length = min_length + static_cast<int>(rng.below(span));
    const Element h = sample_cyclically_reduced(*model, length, rng);
    for (int d : exponents) {
      for (const auto& g : gball->elements()) {
        ++rep.tuples_checked;
        const auto r = decompose_power(h, d, g, *model, delta);
        if (r.status == DecompositionStatus::HypothesisNotMet) continue;
        ++rep.hypotheses_met;
        rep.max_defect = std::max({rep.max_defect, r.ledger34 - static_cast<double>(r.x_length),
                                   r.ledger8 - static_cast<double>(r.power_length)});
        if (!r.holds34()) {
          rep.record_violation("34delta: h=" + model->format(h) + " d=" + std::to_string(d) + " g=" +
                               model->format(g) + " ledger=" + std::to_string(r.ledger34));
        }
        if (!r.holds8()) {
          rep.record_violation("8delta: h=" + model->format(h) + " d=" + std::to_string(d) +
                               " ledger=" + std::to_string(r.ledger8));
        }
      }
    }
  }
  return rep;
}

ScanReport sweep_conjugate_decomposition(const Ball& ball, double delta) {
  ScanReport rep;
  rep.check = "conjugate-decomposition";
  rep.ball_radius = ball.radius();
  rep.mode = "exhaustive";
  const auto& model = ball.model();
  for (const auto& x : ball.elements()) {
    ++rep.tuples_checked;
    ++rep.hypotheses_met;
    try {
      const auto d = decompose_conjugate(x, model, delta, model.is_free_type() ? nullptr : &ball);
      rep.max_defect = std::max(rep.max_defect, static_cast<double>(d.ledger - d.x_length));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BoundViolation) throw;
      rep.record_violation(e.what());
    }
  }
  return rep;
}

PowerGrowth conjugacy_power_growth(const ConjugacyClass& C, int d_max, const GroupModel& model, double delta) {
  PowerGrowth g;
  g.hypothesis_met = !C.finite_order && C.length >= 16.0 * delta;
  for (int d = 1; d <= d_max; ++d) {
    const int len = conjugacy_key(model.power(C.representative, d), model).length();
    g.lengths.push_back(len);
    if (g.hypothesis_met && len < d) ++g.violations;
  }
  if (!g.hypothesis_met) {
    bool fails = false;
    for (int d = 1; d <= d_max; ++d) fails = fails || g.lengths[static_cast<std::size_t>(d - 1)] < d;
    g.note = fails ? "hypothesis |C| >= 16 delta (infinite order) not met; |C^d| >= d fails here, showing it is needed"
                   : "hypothesis |C| >= 16 delta (infinite order) not met; assertion skipped";
  }
  return g;
}

}  // namespace hyperwalk
