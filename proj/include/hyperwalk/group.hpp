#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperwalk/word.hpp"

namespace hyperwalk {

enum class BackendKind { FreeGroup, FreeProductCyclics, SmallCancellationBall };

const char* backend_name(BackendKind kind) noexcept;

/// Element of a group model, stored by its canonical word: the
/// shortlex-least geodesic word over the model's generators. Equality of
/// elements is equality of canonical words.
class Element {
 public:
  Element() = default;
  /// Trusted constructor used by models; `canonical` must already be canonical.
  Element(Word canonical, std::uint32_t model_id) : word_(std::move(canonical)), model_(model_id) {}

  const Word& word() const noexcept { return word_; }
  std::uint32_t model_id() const noexcept { return model_; }
  /// Word length |x|.
  int length() const noexcept { return static_cast<int>(word_.size()); }
  bool is_identity() const noexcept { return word_.empty(); }

  friend bool operator==(const Element& a, const Element& b) noexcept { return a.word_ == b.word_; }
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) noexcept {
    return a.word_ <=> b.word_;
  }

 private:
  Word word_;
  std::uint32_t model_ = 0;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept { return WordHash{}(e.word()); }
};

/// A finitely generated group with a solved word problem and geodesic
/// canonical forms. Models are immutable after construction.
class GroupModel {
 public:
  virtual ~GroupModel() = default;
  GroupModel(const GroupModel&) = delete;
  GroupModel& operator=(const GroupModel&) = delete;

  virtual BackendKind kind() const noexcept = 0;
  /// Human-readable description, also used as the canonical group spec.
  virtual std::string describe() const = 0;

  std::uint32_t id() const noexcept { return id_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int rank() const noexcept { return alphabet_.rank(); }

  /// Letters that label edges of the Cayley graph, in shortlex order.
  /// Order-two generators contribute a single letter.
  const std::vector<Letter>& edge_letters() const noexcept { return edge_letters_; }

  /// Largest radius on which the word problem answers are certified;
  /// nullopt means unbounded.
  virtual std::optional<int> validated_radius() const noexcept { return std::nullopt; }

  virtual Element canonicalize(const Word& w) const = 0;
  virtual Element multiply(const Element& x, const Element& y) const;
  virtual Element invert(const Element& x) const;
  /// Graph distance from the identity.
  int word_length(const Element& x) const;
  Element power(const Element& x, int d) const;
  Element identity() const { return Element(Word{}, id_); }
  Element generator(Letter l) const;
  /// d(x, y) = |x^-1 y|.
  int distance(const Element& x, const Element& y) const;
  /// x^-1 y, the label of a geodesic from x to y.
  Element quotient(const Element& x, const Element& y) const;

  Element parse(std::string_view text) const;
  std::string format(const Element& x) const;
  std::string format(const Word& w) const { return alphabet_.format(w); }

  /// True for the free-product backends, where word-problem answers are exact
  /// everywhere.
  bool is_free_type() const noexcept { return kind() != BackendKind::SmallCancellationBall; }

 protected:
  GroupModel(Alphabet alphabet, std::vector<Letter> edge_letters);
  void check_same_model(const Element& x) const;

 private:
  Alphabet alphabet_;
  std::vector<Letter> edge_letters_;
  std::uint32_t id_;
};

using ModelPtr = std::shared_ptr<const GroupModel>;

/// Free product of cyclic groups Z/m_1 * ... * Z/m_r * F_k. An order of 0
/// means an infinite cyclic factor; a free group is the all-zero case.
///
/// Canonical form is the syllable normal form where each syllable t^e keeps
/// its exponent in the window (-m/2, m/2], written with |e| letters.
class FreeProductModel final : public GroupModel {
 public:
  static std::shared_ptr<const FreeProductModel> free_group(int rank);
  /// `torsion_orders` (each >= 2) are named s, t, u, ...; the `free_rank`
  /// infinite generators follow and are named a, b, c, ...
  static std::shared_ptr<const FreeProductModel> free_product(std::vector<int> torsion_orders,
                                                              int free_rank = 0);

  BackendKind kind() const noexcept override { return kind_; }
  std::string describe() const override;

  Element canonicalize(const Word& w) const override;
  Element multiply(const Element& x, const Element& y) const override;

  /// 0 for infinite order.
  int order(int generator) const { return orders_.at(static_cast<std::size_t>(generator)); }
  const std::vector<int>& orders() const noexcept { return orders_; }
  /// Reduces an exponent into the window (-m/2, m/2] (identity for m = 0).
  int normalize_exponent(int generator, long exponent) const;

  struct Syllable {
    int generator;
    int exponent;
    friend bool operator==(const Syllable&, const Syllable&) = default;
  };
  std::vector<Syllable> syllables(const Word& canonical) const;
  Word word_of(std::span<const Syllable> syllables) const;

  FreeProductModel(BackendKind kind, std::vector<int> orders, Alphabet alphabet);

 private:
  BackendKind kind_;
  std::vector<int> orders_;
};

/// Parses "free:K", "fpc:2,3", "fpc:2,3+1" (one extra free generator),
/// "surface:G:R" and "sc:<path>:R".
ModelPtr make_model(std::string_view spec);

}  // namespace hyperwalk
