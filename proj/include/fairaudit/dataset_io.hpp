#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fairaudit/records.hpp"
#include "fairaudit/score_matrix.hpp"

namespace fairaudit {

// Streams a JSONL file: calls fn(line_number, object) for every
// non-empty line, with 1-based line numbers. Malformed JSON or a
// non-object line raises IoError naming the file and line.
void for_each_jsonl_object(
    const std::filesystem::path& path,
    const std::function<void(std::size_t, const nlohmann::json&)>& fn);

// Prompt datasets: one {"id": ..., "text": ...} object per line.
// Duplicate ids are rejected.
std::vector<PromptRecord> read_prompts(const std::filesystem::path& path);
void write_prompts(std::span<const PromptRecord> prompts,
                   const std::filesystem::path& path);

// Response datasets: one object per line with prompt_id, variant_text,
// response, ok, attempt_count and an optional group.
std::vector<ResponseRecord> read_responses(const std::filesystem::path& path);
void write_responses(std::span<const ResponseRecord> records,
                     const std::filesystem::path& path);
nlohmann::json response_to_json(const ResponseRecord& record);
ResponseRecord response_from_json(const nlohmann::json& j);

// Pre-computed score rows: {"prompt_id": ..., "generation_index": ...,
// "score": ...} per line, scores in [0, 1].
struct ScoreRow {
  std::string prompt_id;
  int generation_index = 0;
  double score = 0.0;

  friend bool operator==(const ScoreRow&, const ScoreRow&) = default;
};

std::vector<ScoreRow> read_score_rows(const std::filesystem::path& path);
void write_score_rows(std::span<const ScoreRow> rows,
                      const std::filesystem::path& path);

// Builds an N x m matrix from rows. Row order follows the first
// appearance of each prompt id; m is 1 + the largest generation index.
// Duplicate (prompt_id, generation_index) pairs are rejected.
ScoreMatrix score_matrix_from_rows(std::span<const ScoreRow> rows);

// Writes content to path via a temp file in the same directory plus an
// atomic rename, so readers never observe a partial file.
void atomic_write_text(const std::filesystem::path& path,
                       std::string_view content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace fairaudit
