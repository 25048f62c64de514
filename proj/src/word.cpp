#include "hyperwalk/word.hpp"

#include <algorithm>
#include <cctype>

#include "hyperwalk/error.hpp"

namespace hyperwalk {

Word::Word(std::initializer_list<Letter> letters) {
  data_.reserve(letters.size());
  for (Letter l : letters) data_.push_back(static_cast<char>(l));
}

Word::Word(std::span<const Letter> letters) {
  data_.reserve(letters.size());
  for (Letter l : letters) data_.push_back(static_cast<char>(l));
}

Word Word::substr(std::size_t pos, std::size_t count) const {
  Word out;
  out.data_ = data_.substr(pos, count);
  return out;
}

Word Word::formal_inverse() const {
  Word out;
  out.data_.resize(data_.size());
  const std::size_t n = data_.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.data_[n - 1 - i] = static_cast<char>(inverse_letter(static_cast<Letter>(data_[i])));
  }
  return out;
}

Word Word::rotated(std::size_t k) const {
  if (data_.empty()) return *this;
  k %= data_.size();
  Word out;
  out.data_ = data_.substr(k) + data_.substr(0, k);
  return out;
}

std::vector<Letter> Word::letters() const {
  auto s = span();
  return {s.begin(), s.end()};
}

std::strong_ordering operator<=>(const Word& a, const Word& b) noexcept {
  if (a.size() != b.size()) return a.size() <=> b.size();
  const int c = a.data_.compare(b.data_);
  // letters are below 128, so char signedness is irrelevant here
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.append(b);
  return out;
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w.span()) {
    if (!out.empty() && out.back() == inverse_letter(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Alphabet::Alphabet(std::vector<char> names) : names_(std::move(names)) {
  for (char c : names_) {
    if (!std::islower(static_cast<unsigned char>(c)) || c == 'e') {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("generator names must be lowercase letters other than 'e', got '") + c + "'");
    }
  }
  auto sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::InvalidArgument, "duplicate generator names");
  }
}

Alphabet Alphabet::standard(int rank) {
  std::vector<char> names;
  char c = 'a';
  while (static_cast<int>(names.size()) < rank) {
    if (c > 'z') throw Error(ErrorCode::InvalidArgument, "rank too large for single-letter names");
    if (c != 'e') names.push_back(c);
    ++c;
  }
  return Alphabet(std::move(names));
}

char Alphabet::symbol(Letter l) const {
  const char c = name(generator_of(l));
  return is_inverse_letter(l) ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
}

Word Alphabet::parse(std::string_view text) const {
  Word w;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == 'e' || c == '1') continue;
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto it = std::find(names_.begin(), names_.end(), lower);
    if (it == names_.end()) {
      throw Error(ErrorCode::Parse, std::string("unknown generator '") + c + "' in word \"" +
                                        std::string(text) + "\"");
    }
    const int g = static_cast<int>(it - names_.begin());
    w.push_back(make_letter(g, c != lower));
  }
  return w;
}

std::string Alphabet::format(const Word& w) const {
  if (w.empty()) return "e";
  std::string out;
  out.reserve(w.size());
  for (Letter l : w.span()) out.push_back(symbol(l));
  return out;
}

}  // namespace hyperwalk
