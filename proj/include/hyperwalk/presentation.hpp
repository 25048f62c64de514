#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hyperwalk/group.hpp"

namespace hyperwalk {

/// Finite presentation <generators | relators>.
///
/// Text format: a header line `rank K [orders m1,...,mK]`, then one relator
/// per line. Generators are the first K standard names (a, b, c, d, f, ...),
/// inverses are uppercase. A nonzero order m adds the relator g^m. Lines
/// starting with '#' are comments.
struct Presentation {
  Alphabet alphabet;
  std::vector<Word> relators;  // cyclically reduced
};

Presentation parse_presentation(std::string_view text);
/// Fundamental group of the closed orientable surface of the given genus,
/// relator [a,b][c,d]...
Presentation surface_presentation(int genus);

/// Result of the C'(1/6) metric small-cancellation check.
struct SmallCancellationReport {
  bool satisfied = true;
  int longest_piece = 0;
  Word piece;
  Word relator;  // relator of the symmetrized set containing the longest piece
  std::string diagnostic;
};

/// Checks that every piece (common prefix of two distinct members of the
/// symmetrized relator set) is shorter than 1/6 of the relators it occurs in.
SmallCancellationReport check_small_cancellation(const Presentation& p);

/// Dehn's algorithm over the symmetrized relator set.
class DehnReducer {
 public:
  explicit DehnReducer(const std::vector<Word>& relators);

  /// Repeatedly frees-reduces and replaces any subword that is more than half
  /// of a symmetrized relator by the inverse of the complement.
  Word reduce(const Word& w) const;
  bool is_trivial(const Word& w) const { return reduce(w).empty(); }
  const std::vector<Word>& symmetrized() const noexcept { return symmetrized_; }

 private:
  std::vector<Word> symmetrized_;
  std::vector<std::vector<std::size_t>> by_first_letter_;
};

/// Group given by a C'(1/6) presentation, known exactly on the ball of a
/// validated radius. The ball is built by BFS at construction; elements
/// outside it raise a BallEscape error instead of being truncated.
class SmallCancellationModel final : public GroupModel {
 public:
  static std::shared_ptr<const SmallCancellationModel> create(Presentation p, int radius);

  BackendKind kind() const noexcept override { return BackendKind::SmallCancellationBall; }
  std::string describe() const override;
  std::optional<int> validated_radius() const noexcept override { return radius_; }

  Element canonicalize(const Word& w) const override;

  const Presentation& presentation() const noexcept { return presentation_; }
  const DehnReducer& dehn() const noexcept { return dehn_; }
  /// Canonical words of the validated ball in shortlex order.
  const std::vector<Word>& ball_words() const noexcept { return words_; }

  SmallCancellationModel(Presentation p, int radius);

 private:
  std::string abelian_key(const Word& w) const;
  std::optional<std::size_t> locate(const Word& reduced) const;
  void build_ball();

  Presentation presentation_;
  DehnReducer dehn_;
  int radius_;
  std::vector<long> abelian_modulus_;
  std::vector<Word> words_;
  std::unordered_map<Word, std::size_t, WordHash> index_;
  std::unordered_map<std::string, std::vector<std::size_t>> buckets_;
};

}  // namespace hyperwalk
