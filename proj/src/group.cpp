#include "hyperwalk/group.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hyperwalk/error.hpp"
#include "hyperwalk/presentation.hpp"

namespace hyperwalk {

namespace {

std::uint32_t next_model_id() {
  static std::atomic<std::uint32_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

int parse_int(std::string_view s, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Parse, std::string("cannot parse ") + what + " from \"" + std::string(s) + "\"");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

const char* backend_name(BackendKind kind) noexcept {
  switch (kind) {
    case BackendKind::FreeGroup: return "FreeGroup";
    case BackendKind::FreeProductCyclics: return "FreeProductCyclics";
    case BackendKind::SmallCancellationBall: return "SmallCancellationBall";
  }
  return "unknown";
}

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::InvalidMeasure: return "invalid_measure";
    case ErrorCode::BallEscape: return "ball_escape";
    case ErrorCode::GuardExceeded: return "guard_exceeded";
    case ErrorCode::BackendMismatch: return "backend_mismatch";
    case ErrorCode::BoundViolation: return "bound_violation";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::NotSmallCancellation: return "not_small_cancellation";
  }
  return "unknown";
}

GroupModel::GroupModel(Alphabet alphabet, std::vector<Letter> edge_letters)
    : alphabet_(std::move(alphabet)), edge_letters_(std::move(edge_letters)), id_(next_model_id()) {}

void GroupModel::check_same_model(const Element& x) const {
  if (x.model_id() != id_) {
    throw Error(ErrorCode::BackendMismatch, "element \"" + format(x.word()) + "\" belongs to another group model");
  }
}

Element GroupModel::multiply(const Element& x, const Element& y) const {
  check_same_model(x);
  check_same_model(y);
  return canonicalize(concat(x.word(), y.word()));
}

Element GroupModel::invert(const Element& x) const {
  check_same_model(x);
  return canonicalize(x.word().formal_inverse());
}

int GroupModel::word_length(const Element& x) const {
  check_same_model(x);
  return x.length();
}

Element GroupModel::power(const Element& x, int d) const {
  if (d < 0) throw Error(ErrorCode::InvalidArgument, "power exponent must be >= 0");
  check_same_model(x);
  Element result = identity();
  Element base = x;
  // square-and-multiply; powers of one element commute
  while (d > 0) {
    if (d & 1) result = multiply(result, base);
    d >>= 1;
    if (d > 0) base = multiply(base, base);
  }
  return result;
}

Element GroupModel::generator(Letter l) const {
  if (generator_of(l) >= rank()) {
    throw Error(ErrorCode::InvalidArgument, "generator index out of range");
  }
  return canonicalize(Word{l});
}

int GroupModel::distance(const Element& x, const Element& y) const {
  return word_length(quotient(x, y));
}

Element GroupModel::quotient(const Element& x, const Element& y) const {
  check_same_model(x);
  check_same_model(y);
  return canonicalize(concat(x.word().formal_inverse(), y.word()));
}

Element GroupModel::parse(std::string_view text) const { return canonicalize(alphabet_.parse(text)); }

std::string GroupModel::format(const Element& x) const { return alphabet_.format(x.word()); }

// ---------------------------------------------------------------------------

namespace {

std::vector<Letter> free_product_edge_letters(const std::vector<int>& orders) {
  std::vector<Letter> letters;
  for (int g = 0; g < static_cast<int>(orders.size()); ++g) {
    letters.push_back(make_letter(g, false));
    if (orders[static_cast<std::size_t>(g)] != 2) letters.push_back(make_letter(g, true));
  }
  return letters;
}

}  // namespace

FreeProductModel::FreeProductModel(BackendKind kind, std::vector<int> orders, Alphabet alphabet)
    : GroupModel(std::move(alphabet), free_product_edge_letters(orders)), kind_(kind), orders_(std::move(orders)) {}

std::shared_ptr<const FreeProductModel> FreeProductModel::free_group(int rank) {
  if (rank < 1) throw Error(ErrorCode::InvalidArgument, "free group rank must be >= 1");
  return std::make_shared<FreeProductModel>(BackendKind::FreeGroup, std::vector<int>(static_cast<std::size_t>(rank), 0),
                                            Alphabet::standard(rank));
}

std::shared_ptr<const FreeProductModel> FreeProductModel::free_product(std::vector<int> torsion_orders, int free_rank) {
  if (free_rank < 0) throw Error(ErrorCode::InvalidArgument, "free rank must be >= 0");
  for (int m : torsion_orders) {
    if (m < 2) throw Error(ErrorCode::InvalidArgument, "cyclic factor orders must be >= 2", "order");
  }
  if (torsion_orders.empty() && free_rank == 0) {
    throw Error(ErrorCode::InvalidArgument, "free product needs at least one factor");
  }
  std::vector<char> names;
  const std::string torsion_names = "stuvwxyz";
  if (torsion_orders.size() > torsion_names.size()) {
    throw Error(ErrorCode::InvalidArgument, "too many cyclic factors");
  }
  for (std::size_t i = 0; i < torsion_orders.size(); ++i) names.push_back(torsion_names[i]);
  const std::string free_names = "abcdfghijklmnopqr";
  if (free_rank > static_cast<int>(free_names.size())) throw Error(ErrorCode::InvalidArgument, "free rank too large");
  for (int i = 0; i < free_rank; ++i) names.push_back(free_names[static_cast<std::size_t>(i)]);
  std::vector<int> orders = torsion_orders;
  orders.resize(orders.size() + static_cast<std::size_t>(free_rank), 0);
  return std::make_shared<FreeProductModel>(BackendKind::FreeProductCyclics, std::move(orders),
                                            Alphabet(std::move(names)));
}

std::string FreeProductModel::describe() const {
  if (kind_ == BackendKind::FreeGroup) return "free:" + std::to_string(rank());
  std::string torsion;
  int free_rank = 0;
  for (int m : orders_) {
    if (m == 0) {
      ++free_rank;
    } else {
      if (!torsion.empty()) torsion += ",";
      torsion += std::to_string(m);
    }
  }
  std::string out = "fpc:" + torsion;
  if (free_rank > 0) out += "+" + std::to_string(free_rank);
  return out;
}

int FreeProductModel::normalize_exponent(int generator, long exponent) const {
  const long m = orders_.at(static_cast<std::size_t>(generator));
  if (m == 0) return static_cast<int>(exponent);
  long r = ((exponent % m) + m) % m;
  if (2 * r > m) r -= m;
  return static_cast<int>(r);
}

std::vector<FreeProductModel::Syllable> FreeProductModel::syllables(const Word& canonical) const {
  std::vector<Syllable> out;
  for (Letter l : canonical.span()) {
    const int g = generator_of(l);
    const int e = is_inverse_letter(l) ? -1 : 1;
    if (!out.empty() && out.back().generator == g) {
      out.back().exponent += e;
    } else {
      out.push_back({g, e});
    }
  }
  return out;
}

Word FreeProductModel::word_of(std::span<const Syllable> syllables) const {
  Word w;
  for (const auto& s : syllables) {
    const Letter l = make_letter(s.generator, s.exponent < 0);
    for (int k = 0; k < std::abs(s.exponent); ++k) w.push_back(l);
  }
  return w;
}

Element FreeProductModel::canonicalize(const Word& w) const {
  std::vector<Syllable> stack;
  stack.reserve(w.size());
  for (Letter l : w.span()) {
    const int g = generator_of(l);
    if (g >= rank()) {
      throw Error(ErrorCode::InvalidArgument, "generator index " + std::to_string(g) + " out of range", "generator");
    }
    const int e = is_inverse_letter(l) ? -1 : 1;
    if (!stack.empty() && stack.back().generator == g) {
      const int merged = normalize_exponent(g, static_cast<long>(stack.back().exponent) + e);
      if (merged == 0) {
        stack.pop_back();
      } else {
        stack.back().exponent = merged;
      }
    } else {
      stack.push_back({g, normalize_exponent(g, e)});
    }
  }
  return Element(word_of(stack), id());
}

Element FreeProductModel::multiply(const Element& x, const Element& y) const {
  check_same_model(x);
  check_same_model(y);
  if (kind_ == BackendKind::FreeGroup) {
    // both inputs are reduced, so only the junction can cancel
    const Word& a = x.word();
    const Word& b = y.word();
    std::size_t k = 0;
    while (k < a.size() && k < b.size() && a[a.size() - 1 - k] == inverse_letter(b[k])) ++k;
    Word out = a.substr(0, a.size() - k);
    out.append(b.substr(k));
    return Element(std::move(out), id());
  }
  return canonicalize(concat(x.word(), y.word()));
}

// ---------------------------------------------------------------------------

ModelPtr make_model(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::Parse, "group spec must look like kind:args, got \"" + std::string(spec) + "\"", "group");
  }
  const auto kind = spec.substr(0, colon);
  const auto args = spec.substr(colon + 1);
  if (kind == "free") return FreeProductModel::free_group(parse_int(args, "free rank"));
  if (kind == "fpc") {
    std::string_view torsion = args;
    int free_rank = 0;
    if (auto plus = args.find('+'); plus != std::string_view::npos) {
      torsion = args.substr(0, plus);
      free_rank = parse_int(args.substr(plus + 1), "free rank");
    }
    std::vector<int> orders;
    if (!torsion.empty()) {
      for (auto part : split(torsion, ',')) orders.push_back(parse_int(part, "cyclic order"));
    }
    return FreeProductModel::free_product(std::move(orders), free_rank);
  }
  if (kind == "surface" || kind == "sc") {
    const auto last = args.rfind(':');
    if (last == std::string_view::npos) {
      throw Error(ErrorCode::Parse, "small-cancellation spec needs a trailing :RADIUS", "group");
    }
    const int radius = parse_int(args.substr(last + 1), "ball radius");
    const auto head = args.substr(0, last);
    if (kind == "surface") {
      return SmallCancellationModel::create(surface_presentation(parse_int(head, "genus")), radius);
    }
    std::ifstream in{std::string(head)};
    if (!in) throw Error(ErrorCode::Parse, "cannot open presentation file \"" + std::string(head) + "\"", "group");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return SmallCancellationModel::create(parse_presentation(buffer.str()), radius);
  }
  throw Error(ErrorCode::Parse, "unknown group kind \"" + std::string(kind) + "\"", "group");
}

}  // namespace hyperwalk
