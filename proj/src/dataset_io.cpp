#include "fairaudit/dataset_io.hpp"

#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fairaudit/error.hpp"

namespace fairaudit {
namespace {

std::string loc(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

bool trimmed_empty(const std::string& s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\r' && c != '\n') return false;
  }
  return true;
}

void require_string_field(const nlohmann::json& j, const char* field,
                          const std::filesystem::path& path, std::size_t line) {
  if (!j.contains(field) || !j.at(field).is_string()) {
    throw IoError("missing or non-string '" + std::string(field) + "' at " +
                  loc(path, line));
  }
}

}  // namespace

void for_each_jsonl_object(
    const std::filesystem::path& path,
    const std::function<void(std::size_t, const nlohmann::json&)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed_empty(line)) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw IoError("malformed JSON at " + loc(path, line_no));
    }
    if (!j.is_object()) {
      throw IoError("expected an object at " + loc(path, line_no));
    }
    fn(line_no, j);
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
}

std::vector<PromptRecord> read_prompts(const std::filesystem::path& path) {
  std::vector<PromptRecord> out;
  std::set<std::string> seen;
  for_each_jsonl_object(path, [&](std::size_t line, const nlohmann::json& j) {
    require_string_field(j, "id", path, line);
    require_string_field(j, "text", path, line);
    PromptRecord r{j.at("id").get<std::string>(), j.at("text").get<std::string>()};
    if (r.id.empty()) throw IoError("empty prompt id at " + loc(path, line));
    if (trimmed_empty(r.text)) {
      throw IoError("empty prompt text at " + loc(path, line));
    }
    if (!seen.insert(r.id).second) {
      throw IoError("duplicate prompt id \"" + r.id + "\" at " + loc(path, line),
                    "E_DUPLICATE_ID");
    }
    out.push_back(std::move(r));
  });
  return out;
}

void write_prompts(std::span<const PromptRecord> prompts,
                   const std::filesystem::path& path) {
  std::string body;
  for (const auto& p : prompts) {
    nlohmann::json j{{"id", p.id}, {"text", p.text}};
    body += j.dump();
    body += '\n';
  }
  atomic_write_text(path, body);
}

nlohmann::json response_to_json(const ResponseRecord& r) {
  nlohmann::json j;
  j["prompt_id"] = r.prompt_id;
  if (r.group) j["group"] = *r.group;
  j["variant_text"] = r.variant_text;
  j["response"] = r.response;
  j["ok"] = r.ok;
  j["attempt_count"] = r.attempt_count;
  return j;
}

ResponseRecord response_from_json(const nlohmann::json& j) {
  ResponseRecord r;
  if (!j.contains("prompt_id") || !j.at("prompt_id").is_string()) {
    throw IoError("response record needs a string 'prompt_id'");
  }
  r.prompt_id = j.at("prompt_id").get<std::string>();
  if (j.contains("group") && !j.at("group").is_null()) {
    if (!j.at("group").is_string()) {
      throw IoError("response 'group' must be a string");
    }
    r.group = j.at("group").get<std::string>();
  }
  if (j.contains("variant_text")) {
    if (!j.at("variant_text").is_string()) {
      throw IoError("response 'variant_text' must be a string");
    }
    r.variant_text = j.at("variant_text").get<std::string>();
  }
  if (!j.contains("response") || !j.at("response").is_string()) {
    throw IoError("response record needs a string 'response'");
  }
  r.response = j.at("response").get<std::string>();
  if (j.contains("ok")) {
    if (!j.at("ok").is_boolean()) throw IoError("response 'ok' must be boolean");
    r.ok = j.at("ok").get<bool>();
  }
  if (j.contains("attempt_count")) {
    if (!j.at("attempt_count").is_number_integer()) {
      throw IoError("response 'attempt_count' must be an integer");
    }
    r.attempt_count = j.at("attempt_count").get<int>();
  }
  if (r.attempt_count < 1) throw IoError("response 'attempt_count' must be >= 1");
  if (!r.ok && !r.response.empty()) {
    throw IoError("failed response record must carry an empty response");
  }
  return r;
}

std::vector<ResponseRecord> read_responses(const std::filesystem::path& path) {
  std::vector<ResponseRecord> out;
  for_each_jsonl_object(path, [&](std::size_t line, const nlohmann::json& j) {
    try {
      out.push_back(response_from_json(j));
    } catch (const IoError& e) {
      throw IoError(std::string(e.what()) + " at " + loc(path, line));
    }
  });
  return out;
}

void write_responses(std::span<const ResponseRecord> records,
                     const std::filesystem::path& path) {
  std::string body;
  for (const auto& r : records) {
    body += response_to_json(r).dump();
    body += '\n';
  }
  atomic_write_text(path, body);
}

std::vector<ScoreRow> read_score_rows(const std::filesystem::path& path) {
  std::vector<ScoreRow> out;
  for_each_jsonl_object(path, [&](std::size_t line, const nlohmann::json& j) {
    require_string_field(j, "prompt_id", path, line);
    if (!j.contains("generation_index") ||
        !j.at("generation_index").is_number_integer()) {
      throw IoError("missing or non-integer 'generation_index' at " +
                    loc(path, line));
    }
    if (!j.contains("score") || !j.at("score").is_number()) {
      throw IoError("missing or non-numeric 'score' at " + loc(path, line));
    }
    ScoreRow row{j.at("prompt_id").get<std::string>(),
                 j.at("generation_index").get<int>(),
                 j.at("score").get<double>()};
    if (row.generation_index < 0) {
      throw IoError("negative generation_index at " + loc(path, line));
    }
    if (!(row.score >= 0.0 && row.score <= 1.0)) {
      throw IoError("score out of [0,1] at " + loc(path, line));
    }
    out.push_back(std::move(row));
  });
  return out;
}

void write_score_rows(std::span<const ScoreRow> rows,
                      const std::filesystem::path& path) {
  std::string body;
  for (const auto& r : rows) {
    nlohmann::json j{{"prompt_id", r.prompt_id},
                     {"generation_index", r.generation_index},
                     {"score", r.score}};
    body += j.dump();
    body += '\n';
  }
  atomic_write_text(path, body);
}

ScoreMatrix score_matrix_from_rows(std::span<const ScoreRow> rows) {
  std::vector<std::string> ids;
  std::map<std::string, std::size_t> row_of;
  int max_index = -1;
  for (const auto& r : rows) {
    if (row_of.emplace(r.prompt_id, ids.size()).second) ids.push_back(r.prompt_id);
    if (r.generation_index > max_index) max_index = r.generation_index;
  }
  if (ids.empty()) return ScoreMatrix{};
  ScoreMatrix m(std::move(ids), max_index + 1);
  std::set<std::pair<std::string, int>> seen;
  for (const auto& r : rows) {
    if (!seen.emplace(r.prompt_id, r.generation_index).second) {
      throw IoError("duplicate score row for (" + r.prompt_id + ", " +
                    std::to_string(r.generation_index) + ")",
                    "E_DUPLICATE_ID");
    }
    m.set(row_of.at(r.prompt_id), r.generation_index, r.score);
  }
  return m;
}

void atomic_write_text(const std::filesystem::path& path,
                       std::string_view content) {
  namespace fs = std::filesystem;
  fs::path dir = path.parent_path();
  if (dir.empty()) dir = ".";
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream tmp_name;
  tmp_name << "." << path.filename().string() << ".tmp." << std::hex
           << rng();
  const fs::path tmp = dir / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failure on " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into place: " + path.string());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path.string());
  return ss.str();
}

}  // namespace fairaudit
