#include "hyperwalk/presentation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "hyperwalk/error.hpp"

namespace hyperwalk {

namespace {

Word cyclically_reduce_word(Word w) {
  w = free_reduce(w);
  std::size_t i = 0;
  std::size_t j = w.size();
  while (j - i >= 2 && w[i] == inverse_letter(w[j - 1])) {
    ++i;
    --j;
  }
  return w.substr(i, j - i);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Presentation parse_presentation(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<Alphabet> alphabet;
  std::vector<int> orders;
  std::vector<Word> relators;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    if (!alphabet) {
      std::istringstream header(body);
      std::string keyword;
      int rank = 0;
      header >> keyword >> rank;
      if (keyword != "rank" || rank < 1) {
        throw Error(ErrorCode::Parse, "presentation header must be `rank K [orders m1,...]`", "presentation");
      }
      alphabet = Alphabet::standard(rank);
      std::string tail;
      if (header >> tail) {
        if (tail != "orders") throw Error(ErrorCode::Parse, "unexpected token in header: " + tail, "presentation");
        std::string list;
        header >> list;
        std::istringstream items(list);
        std::string item;
        while (std::getline(items, item, ',')) orders.push_back(std::stoi(item));
        if (static_cast<int>(orders.size()) != rank) {
          throw Error(ErrorCode::Parse, "orders list must have one entry per generator", "presentation");
        }
      }
      continue;
    }
    Word r = cyclically_reduce_word(alphabet->parse(body));
    if (r.empty()) {
      throw Error(ErrorCode::Parse, "relator on line " + std::to_string(line_no) + " is trivial", "presentation");
    }
    relators.push_back(std::move(r));
  }
  if (!alphabet) throw Error(ErrorCode::Parse, "empty presentation", "presentation");
  for (std::size_t g = 0; g < orders.size(); ++g) {
    if (orders[g] == 0) continue;
    if (orders[g] < 2) throw Error(ErrorCode::Parse, "generator orders must be 0 or >= 2", "presentation");
    Word power;
    for (int k = 0; k < orders[g]; ++k) power.push_back(make_letter(static_cast<int>(g), false));
    relators.push_back(std::move(power));
  }
  return Presentation{std::move(*alphabet), std::move(relators)};
}

Presentation surface_presentation(int genus) {
  if (genus < 1) throw Error(ErrorCode::InvalidArgument, "surface genus must be >= 1");
  Alphabet alphabet = Alphabet::standard(2 * genus);
  Word r;
  for (int i = 0; i < genus; ++i) {
    const Letter a = make_letter(2 * i, false);
    const Letter b = make_letter(2 * i + 1, false);
    for (Letter l : {a, b, inverse_letter(a), inverse_letter(b)}) r.push_back(l);
  }
  return Presentation{std::move(alphabet), {r}};
}

namespace {

std::vector<Word> symmetrize(const std::vector<Word>& relators) {
  std::vector<Word> out;
  for (const Word& r : relators) {
    for (const Word& base : {r, r.formal_inverse()}) {
      for (std::size_t k = 0; k < base.size(); ++k) out.push_back(base.rotated(k));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

SmallCancellationReport check_small_cancellation(const Presentation& p) {
  SmallCancellationReport report;
  const auto sym = symmetrize(p.relators);
  for (std::size_t i = 0; i < sym.size(); ++i) {
    for (std::size_t j = 0; j < sym.size(); ++j) {
      if (i == j) continue;
      const Word& r1 = sym[i];
      const Word& r2 = sym[j];
      std::size_t len = 0;
      while (len < r1.size() && len < r2.size() && r1[len] == r2[len]) ++len;
      if (static_cast<int>(len) > report.longest_piece) {
        report.longest_piece = static_cast<int>(len);
        report.piece = r1.substr(0, len);
        report.relator = r1;
      }
      if (6 * len >= r1.size()) {
        if (report.satisfied) {
          report.satisfied = false;
          report.diagnostic = "piece \"" + p.alphabet.format(r1.substr(0, len)) + "\" of length " +
                              std::to_string(len) + " is not shorter than 1/6 of relator \"" +
                              p.alphabet.format(r1) + "\"";
        }
      }
    }
  }
  return report;
}

DehnReducer::DehnReducer(const std::vector<Word>& relators) : symmetrized_(symmetrize(relators)) {
  Letter max_letter = 0;
  for (const Word& r : symmetrized_) {
    for (Letter l : r.span()) max_letter = std::max(max_letter, l);
  }
  by_first_letter_.resize(static_cast<std::size_t>(max_letter) + 2);
  for (std::size_t i = 0; i < symmetrized_.size(); ++i) by_first_letter_[symmetrized_[i].front()].push_back(i);
}

Word DehnReducer::reduce(const Word& w) const {
  Word cur = free_reduce(w);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < cur.size() && !changed; ++i) {
      if (cur[i] >= by_first_letter_.size()) continue;
      for (std::size_t idx : by_first_letter_[cur[i]]) {
        const Word& r = symmetrized_[idx];
        std::size_t len = 0;
        while (len < r.size() && i + len < cur.size() && cur[i + len] == r[len]) ++len;
        if (2 * len > r.size()) {
          Word next = cur.substr(0, i);
          next.append(r.substr(len).formal_inverse());
          next.append(cur.substr(i + len));
          cur = free_reduce(next);
          changed = true;
          break;
        }
      }
    }
  }
  return cur;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const SmallCancellationModel> SmallCancellationModel::create(Presentation p, int radius) {
  return std::make_shared<SmallCancellationModel>(std::move(p), radius);
}

namespace {

std::vector<Letter> all_letters(int rank) {
  std::vector<Letter> out;
  for (int g = 0; g < rank; ++g) {
    out.push_back(make_letter(g, false));
    out.push_back(make_letter(g, true));
  }
  return out;
}

Presentation checked(Presentation p) {
  auto report = check_small_cancellation(p);
  if (!report.satisfied) {
    throw Error(ErrorCode::NotSmallCancellation, "presentation fails C'(1/6): " + report.diagnostic, "presentation");
  }
  return p;
}

}  // namespace

SmallCancellationModel::SmallCancellationModel(Presentation p, int radius)
    : GroupModel(p.alphabet, all_letters(p.alphabet.rank())),
      presentation_(checked(std::move(p))),
      dehn_(presentation_.relators),
      radius_(radius) {
  if (radius < 1) throw Error(ErrorCode::InvalidArgument, "validated radius must be >= 1", "radius");
  abelian_modulus_.assign(static_cast<std::size_t>(rank()), 0);
  for (const Word& r : presentation_.relators) {
    std::vector<long> sums(static_cast<std::size_t>(rank()), 0);
    for (Letter l : r.span()) sums[static_cast<std::size_t>(generator_of(l))] += is_inverse_letter(l) ? -1 : 1;
    for (std::size_t g = 0; g < sums.size(); ++g) abelian_modulus_[g] = std::gcd(abelian_modulus_[g], sums[g]);
  }
  build_ball();
}

std::string SmallCancellationModel::describe() const {
  std::string rel;
  for (const Word& r : presentation_.relators) {
    if (!rel.empty()) rel += ",";
    rel += alphabet().format(r);
  }
  return "sc:<" + rel + ">:" + std::to_string(radius_);
}

std::string SmallCancellationModel::abelian_key(const Word& w) const {
  std::vector<long> sums(static_cast<std::size_t>(rank()), 0);
  for (Letter l : w.span()) sums[static_cast<std::size_t>(generator_of(l))] += is_inverse_letter(l) ? -1 : 1;
  std::string key;
  for (std::size_t g = 0; g < sums.size(); ++g) {
    long v = sums[g];
    if (const long m = abelian_modulus_[g]; m != 0) v = ((v % m) + m) % m;
    key += std::to_string(v);
    key += ',';
  }
  return key;
}

std::optional<std::size_t> SmallCancellationModel::locate(const Word& reduced) const {
  if (auto it = index_.find(reduced); it != index_.end()) return it->second;
  auto bucket = buckets_.find(abelian_key(reduced));
  if (bucket == buckets_.end()) return std::nullopt;
  for (std::size_t idx : bucket->second) {
    if (dehn_.is_trivial(concat(reduced, words_[idx].formal_inverse()))) return idx;
  }
  return std::nullopt;
}

void SmallCancellationModel::build_ball() {
  auto add = [this](Word w) {
    const std::size_t idx = words_.size();
    buckets_[abelian_key(w)].push_back(idx);
    index_.emplace(w, idx);
    words_.push_back(std::move(w));
  };
  add(Word{});
  std::size_t layer_begin = 0;
  for (int r = 0; r < radius_; ++r) {
    const std::size_t layer_end = words_.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      const Word u = words_[i];
      for (Letter l : edge_letters()) {
        if (!u.empty() && u.back() == inverse_letter(l)) continue;
        Word w = u;
        w.push_back(l);
        if (locate(dehn_.reduce(w))) continue;
        add(std::move(w));
      }
    }
    layer_begin = layer_end;
  }
}

Element SmallCancellationModel::canonicalize(const Word& w) const {
  for (Letter l : w.span()) {
    if (generator_of(l) >= rank()) {
      throw Error(ErrorCode::InvalidArgument, "generator index out of range", "generator");
    }
  }
  const Word reduced = dehn_.reduce(w);
  if (auto idx = locate(reduced)) return Element(words_[*idx], id());
  throw Error(ErrorCode::BallEscape,
              "word \"" + alphabet().format(w) + "\" leaves the validated ball of radius " + std::to_string(radius_),
              "ball_radius");
}

}  // namespace hyperwalk
