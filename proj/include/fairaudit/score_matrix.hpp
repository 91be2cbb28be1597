#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fairaudit {

// Classifier scores for N prompts x m generations, row-major. A cell is
// empty where the generation failed or was never scored. All present
// values lie in [0, 1]; setters reject anything else.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::vector<std::string> prompt_ids, int generations);

  std::size_t rows() const { return prompt_ids_.size(); }
  int generations() const { return generations_; }
  const std::vector<std::string>& prompt_ids() const { return prompt_ids_; }

  std::optional<double> at(std::size_t row, int col) const;
  void set(std::size_t row, int col, double score);
  void clear_cell(std::size_t row, int col);

  // Number of non-empty cells.
  long long present_count() const;

  friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;

 private:
  std::size_t index(std::size_t row, int col) const;

  std::vector<std::string> prompt_ids_;
  int generations_ = 0;
  std::vector<std::optional<double>> cells_;
};

}  // namespace fairaudit
