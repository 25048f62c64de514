#include "hyperwalk/ball.hpp"

#include <algorithm>

#include "hyperwalk/error.hpp"

namespace hyperwalk {

BallPtr Ball::enumerate(ModelPtr model, int radius, std::size_t max_size) {
  if (radius < 0) throw Error(ErrorCode::InvalidArgument, "ball radius must be >= 0", "radius");
  if (auto limit = model->validated_radius(); limit && radius > *limit) {
    throw Error(ErrorCode::BallEscape,
                "ball radius " + std::to_string(radius) + " exceeds validated radius " + std::to_string(*limit),
                "ball_radius");
  }
  std::shared_ptr<Ball> ball(new Ball(model, radius));
  const auto& letters = model->edge_letters();
  ball->edge_count_ = letters.size();

  std::vector<Element> gens;
  gens.reserve(letters.size());
  for (Letter l : letters) gens.push_back(model->generator(l));

  auto insert = [&](Element e) -> std::uint32_t {
    const auto idx = static_cast<std::uint32_t>(ball->elements_.size());
    if (ball->elements_.size() >= max_size) {
      throw Error(ErrorCode::GuardExceeded,
                  "ball of radius " + std::to_string(radius) + " exceeds the size guard of " +
                      std::to_string(max_size) + " elements",
                  "support_guard");
    }
    ball->index_.emplace(e.word(), idx);
    ball->elements_.push_back(std::move(e));
    return idx;
  };

  insert(model->identity());
  ball->layer_end_.push_back(1);
  std::size_t begin = 0;
  for (int r = 0; r < radius; ++r) {
    const std::size_t end = ball->elements_.size();
    std::vector<Element> fresh;
    for (std::size_t i = begin; i < end; ++i) {
      for (const Element& g : gens) {
        Element y = model->multiply(ball->elements_[i], g);
        if (y.length() == r + 1) fresh.push_back(std::move(y));
      }
    }
    std::sort(fresh.begin(), fresh.end());
    fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
    for (Element& e : fresh) insert(std::move(e));
    ball->layer_end_.push_back(ball->elements_.size());
    begin = end;
  }

  const std::size_t n = ball->elements_.size();
  ball->neighbors_.assign(n * ball->edge_count_, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const bool boundary = ball->elements_[i].length() == radius;
    for (std::size_t s = 0; s < gens.size(); ++s) {
      // products leaving the ball are only possible from the boundary sphere; for
      // validated-radius models the product itself may not be computable there
      Element y;
      if (boundary) {
        try {
          y = model->multiply(ball->elements_[i], gens[s]);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::BallEscape) continue;
          throw;
        }
      } else {
        y = model->multiply(ball->elements_[i], gens[s]);
      }
      if (auto j = ball->find(y)) ball->neighbors_[i * ball->edge_count_ + s] = static_cast<std::int32_t>(*j);
    }
  }
  return ball;
}

std::size_t Ball::count_within(int r) const {
  if (r < 0) return 0;
  if (r >= radius_) return elements_.size();
  return layer_end_[static_cast<std::size_t>(r)];
}

std::optional<std::uint32_t> Ball::find(const Element& x) const {
  if (x.model_id() != model_->id()) {
    throw Error(ErrorCode::BackendMismatch, "element belongs to another group model");
  }
  return find(x.word());
}

std::optional<std::uint32_t> Ball::find(const Word& canonical) const {
  if (auto it = index_.find(canonical); it != index_.end()) return it->second;
  return std::nullopt;
}

std::uint32_t Ball::index_of(const Element& x) const {
  if (auto i = find(x)) return *i;
  throw Error(ErrorCode::BallEscape,
              "element \"" + model_->format(x) + "\" is outside the ball of radius " + std::to_string(radius_),
              "ball_radius");
}

std::vector<std::int32_t> Ball::right_table(std::span<const Element> steps, int row_radius) const {
  const std::size_t rows = count_within(row_radius);
  std::vector<std::int32_t> table(rows * steps.size(), -1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < steps.size(); ++j) {
      if (steps[j].length() == 1) {
        const Letter l = steps[j].word()[0];
        const auto& letters = model_->edge_letters();
        auto it = std::find(letters.begin(), letters.end(), l);
        if (it != letters.end()) {
          table[i * steps.size() + j] = neighbor(i, static_cast<std::size_t>(it - letters.begin()));
          continue;
        }
      }
      if (elements_[i].length() + steps[j].length() > radius_ && !model_->is_free_type()) {
        try {
          if (auto k = find(model_->multiply(elements_[i], steps[j]))) {
            table[i * steps.size() + j] = static_cast<std::int32_t>(*k);
          }
        } catch (const Error& e) {
          if (e.code() != ErrorCode::BallEscape) throw;
        }
        continue;
      }
      if (auto k = find(model_->multiply(elements_[i], steps[j]))) {
        table[i * steps.size() + j] = static_cast<std::int32_t>(*k);
      }
    }
  }
  return table;
}

std::size_t free_group_ball_size(int rank, int radius) {
  std::size_t total = 1;
  std::size_t sphere = 2 * static_cast<std::size_t>(rank);
  for (int i = 1; i <= radius; ++i) {
    total += sphere;
    sphere *= 2 * static_cast<std::size_t>(rank) - 1;
  }
  return total;
}

}  // namespace hyperwalk
