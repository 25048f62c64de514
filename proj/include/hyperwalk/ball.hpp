#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "hyperwalk/group.hpp"

namespace hyperwalk {

inline constexpr std::size_t kDefaultSupportGuard = 50'000'000;

/// The elements of word length at most `radius`, in shortlex order (hence
/// sorted by distance from the identity), with the right-multiplication
/// table for the Cayley-graph edge letters.
class Ball {
 public:
  /// BFS enumeration. Throws GuardExceeded past `max_size` elements and
  /// BallEscape when `radius` exceeds the model's validated radius.
  static std::shared_ptr<const Ball> enumerate(ModelPtr model, int radius,
                                               std::size_t max_size = kDefaultSupportGuard);

  const GroupModel& model() const noexcept { return *model_; }
  const ModelPtr& model_ptr() const noexcept { return model_; }
  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return elements_.size(); }

  const Element& element(std::size_t i) const { return elements_[i]; }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  /// Distance from the identity (BFS layer).
  int length(std::size_t i) const noexcept { return elements_[i].length(); }
  /// Number of elements with |g| <= r (clamped to the ball).
  std::size_t count_within(int r) const;

  std::optional<std::uint32_t> find(const Element& x) const;
  std::optional<std::uint32_t> find(const Word& canonical) const;
  bool contains(const Element& x) const { return find(x).has_value(); }
  std::uint32_t index_of(const Element& x) const;  // throws BallEscape

  /// Index of element(i) * edge_letters()[slot], or -1 outside the ball.
  std::int32_t neighbor(std::size_t i, std::size_t slot) const noexcept {
    return neighbors_[i * edge_count_ + slot];
  }
  std::size_t edge_count() const noexcept { return edge_count_; }

  /// Right-multiplication table for arbitrary step elements:
  /// result[i * steps.size() + j] = index of element(i) * steps[j], or -1.
  /// Only rows with |element(i)| <= `row_radius` are filled.
  std::vector<std::int32_t> right_table(std::span<const Element> steps, int row_radius) const;

 private:
  Ball(ModelPtr model, int radius) : model_(std::move(model)), radius_(radius) {}

  ModelPtr model_;
  int radius_;
  std::vector<Element> elements_;
  std::vector<std::size_t> layer_end_;
  std::unordered_map<Word, std::uint32_t, WordHash> index_;
  std::size_t edge_count_ = 0;
  std::vector<std::int32_t> neighbors_;
};

using BallPtr = std::shared_ptr<const Ball>;

/// Closed-form ball size 1 + sum_{i=1}^{R} 2k(2k-1)^{i-1} for the free group of rank k.
std::size_t free_group_ball_size(int rank, int radius);

}  // namespace hyperwalk
