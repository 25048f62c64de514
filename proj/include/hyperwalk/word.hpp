#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hyperwalk {

/// A letter encodes a generator and an inversion flag as `2 * index + inverse`.
/// Numeric order of letters is the shortlex generator order a < A < b < B < ...
using Letter = std::uint8_t;

constexpr Letter inverse_letter(Letter l) noexcept { return static_cast<Letter>(l ^ 1u); }
constexpr int generator_of(Letter l) noexcept { return l >> 1; }
constexpr bool is_inverse_letter(Letter l) noexcept { return (l & 1u) != 0; }
constexpr Letter make_letter(int generator, bool inverse) noexcept {
  return static_cast<Letter>(2 * generator + (inverse ? 1 : 0));
}

struct Generator {
  std::uint8_t index = 0;
  bool inverse = false;

  constexpr Letter letter() const noexcept { return make_letter(index, inverse); }
  constexpr Generator inverted() const noexcept { return {index, !inverse}; }
  static constexpr Generator from_letter(Letter l) noexcept {
    return {static_cast<std::uint8_t>(generator_of(l)), is_inverse_letter(l)};
  }
  friend constexpr bool operator==(Generator, Generator) = default;
};

/// Sequence of letters. Not necessarily reduced; models turn words into
/// canonical elements.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters);
  explicit Word(std::span<const Letter> letters);

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  Letter operator[](std::size_t i) const noexcept { return static_cast<Letter>(data_[i]); }
  Letter front() const noexcept { return static_cast<Letter>(data_.front()); }
  Letter back() const noexcept { return static_cast<Letter>(data_.back()); }

  void push_back(Letter l) { data_.push_back(static_cast<char>(l)); }
  void pop_back() { data_.pop_back(); }
  void clear() noexcept { data_.clear(); }
  void reserve(std::size_t n) { data_.reserve(n); }
  void append(const Word& other) { data_ += other.data_; }

  Word substr(std::size_t pos, std::size_t count = std::string::npos) const;
  /// Letters reversed and individually inverted; not canonicalized.
  Word formal_inverse() const;
  /// Left rotation by `k` letters.
  Word rotated(std::size_t k) const;

  std::vector<Letter> letters() const;
  std::span<const Letter> span() const noexcept {
    return {reinterpret_cast<const Letter*>(data_.data()), data_.size()};
  }
  const std::string& bytes() const noexcept { return data_; }

  friend bool operator==(const Word&, const Word&) = default;
  /// Shortlex: shorter words first, then lexicographic on letters.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) noexcept;

 private:
  std::string data_;
};

Word concat(const Word& a, const Word& b);

/// Free reduction (cancels adjacent `x x^-1` pairs).
Word free_reduce(const Word& w);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    return std::hash<std::string>{}(w.bytes());
  }
};

/// Maps generator indices to display characters: lowercase names for the
/// generators, uppercase for their inverses. The identity is written "e".
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<char> names);

  /// Default names a, b, c, d, f, g, ... ('e' is reserved for the identity).
  static Alphabet standard(int rank);

  int rank() const noexcept { return static_cast<int>(names_.size()); }
  char name(int generator) const { return names_.at(static_cast<std::size_t>(generator)); }
  char symbol(Letter l) const;
  const std::vector<char>& names() const noexcept { return names_; }

  /// Parses letters; whitespace, "e" and "1" are ignored. Throws on unknown
  /// characters.
  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;

 private:
  std::vector<char> names_;
};

}  // namespace hyperwalk
