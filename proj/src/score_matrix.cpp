#include "fairaudit/score_matrix.hpp"

#include "fairaudit/error.hpp"

namespace fairaudit {

ScoreMatrix::ScoreMatrix(std::vector<std::string> prompt_ids, int generations)
    : prompt_ids_(std::move(prompt_ids)), generations_(generations) {
  if (generations_ < 1) {
    throw ConfigError("score matrix needs at least one generation column");
  }
  cells_.assign(prompt_ids_.size() * static_cast<std::size_t>(generations_),
                std::nullopt);
}

std::size_t ScoreMatrix::index(std::size_t row, int col) const {
  if (row >= prompt_ids_.size() || col < 0 || col >= generations_) {
    throw ConfigError("score matrix cell out of range");
  }
  return row * static_cast<std::size_t>(generations_) +
         static_cast<std::size_t>(col);
}

std::optional<double> ScoreMatrix::at(std::size_t row, int col) const {
  return cells_[index(row, col)];
}

void ScoreMatrix::set(std::size_t row, int col, double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw ConfigError("score out of [0,1]: " + std::to_string(score));
  }
  cells_[index(row, col)] = score;
}

void ScoreMatrix::clear_cell(std::size_t row, int col) {
  cells_[index(row, col)] = std::nullopt;
}

long long ScoreMatrix::present_count() const {
  long long n = 0;
  for (const auto& c : cells_) {
    if (c) ++n;
  }
  return n;
}

}  // namespace fairaudit
