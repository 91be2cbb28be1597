#include "fairaudit/lexicon.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "fairaudit/builtin_data.hpp"
#include "fairaudit/dataset_io.hpp"
#include "fairaudit/error.hpp"
#include "fairaudit/tokenize.hpp"

namespace fairaudit {
namespace {

// Canonical form of a lexicon word: its lowercase tokens space-joined,
// so declared words and matched text normalize identically.
std::string canonical_word(const std::string& raw, const std::string& origin) {
  auto tokens = tokenize(raw);
  if (tokens.empty()) {
    throw ConfigError("lexicon word \"" + raw + "\" has no word characters (" +
                      origin + ")");
  }
  std::string out = tokens[0];
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    out += ' ';
    out += tokens[i];
  }
  return out;
}

bool ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }

char to_upper_ascii(char c) {
  return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 32) : c;
}

// Mirrors the casing style of the replaced span onto the replacement:
// all-caps spans produce all-caps replacements; otherwise each source
// word with a leading capital capitalizes the matching replacement word
// (trailing replacement words follow the last source word's style).
std::string mirror_case(std::string_view original, const std::string& replacement) {
  bool any_alpha = false;
  bool all_upper = true;
  int alpha_count = 0;
  for (char c : original) {
    if (ascii_alpha(c)) {
      any_alpha = true;
      ++alpha_count;
      if (!ascii_upper(c)) all_upper = false;
    }
  }
  if (!any_alpha) return replacement;
  if (all_upper && alpha_count >= 2) {
    std::string out = replacement;
    for (char& c : out) c = to_upper_ascii(c);
    return out;
  }
  // Word-wise initial caps.
  std::vector<bool> source_caps;
  bool at_word_start = true;
  for (char c : original) {
    if (c == ' ') {
      at_word_start = true;
    } else {
      if (at_word_start && ascii_alpha(c)) source_caps.push_back(ascii_upper(c));
      at_word_start = false;
    }
  }
  std::string out = replacement;
  std::size_t word = 0;
  at_word_start = true;
  for (char& c : out) {
    if (c == ' ') {
      at_word_start = true;
      ++word;
    } else {
      if (at_word_start && ascii_alpha(c)) {
        const bool cap = source_caps.empty()
                             ? false
                             : source_caps[std::min(word, source_caps.size() - 1)];
        if (cap) c = to_upper_ascii(c);
      }
      at_word_start = false;
    }
  }
  return out;
}

}  // namespace

AttributeLexicon AttributeLexicon::from_json_text(std::string_view text,
                                                  const std::string& origin) {
  nlohmann::ordered_json doc =
      nlohmann::ordered_json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ConfigError("lexicon is not a JSON object (" + origin + ")");
  }
  if (!doc.contains("attribute") || !doc.at("attribute").is_string()) {
    throw ConfigError("lexicon needs a string 'attribute' (" + origin + ")");
  }
  if (!doc.contains("groups") || !doc.at("groups").is_object()) {
    throw ConfigError("lexicon needs a 'groups' object (" + origin + ")");
  }
  if (!doc.contains("counterparts") || !doc.at("counterparts").is_object()) {
    throw ConfigError("lexicon needs a 'counterparts' object (" + origin + ")");
  }

  AttributeLexicon lex;
  lex.attribute_ = doc.at("attribute").get<std::string>();
  if (lex.attribute_.empty()) {
    throw ConfigError("lexicon attribute name is empty (" + origin + ")");
  }

  for (const auto& [group, words] : doc.at("groups").items()) {
    if (group.empty()) throw ConfigError("empty group name (" + origin + ")");
    if (!words.is_array()) {
      throw ConfigError("group \"" + group + "\" must list words (" + origin + ")");
    }
    lex.group_order_.push_back(group);
    auto& bucket = lex.group_words_[group];
    for (const auto& w : words) {
      if (!w.is_string()) {
        throw ConfigError("non-string word in group \"" + group + "\" (" +
                          origin + ")");
      }
      const std::string canon = canonical_word(w.get<std::string>(), origin);
      auto [it, inserted] = lex.word_group_.emplace(canon, group);
      if (!inserted) {
        throw ConfigError("word \"" + canon + "\" declared in groups \"" +
                          it->second + "\" and \"" + group + "\" (" + origin +
                          ")");
      }
      bucket.push_back(canon);
    }
  }
  if (lex.group_order_.size() < 2) {
    throw ConfigError("lexicon needs at least two groups (" + origin + ")");
  }

  for (const auto& [raw_word, repl_map] : doc.at("counterparts").items()) {
    const std::string word = canonical_word(raw_word, origin);
    if (!lex.word_group_.count(word)) {
      throw ConfigError("counterpart entry for unknown word \"" + word + "\" (" +
                        origin + ")");
    }
    if (!repl_map.is_object()) {
      throw ConfigError("counterparts of \"" + word + "\" must be an object (" +
                        origin + ")");
    }
    auto& slot = lex.counterparts_[word];
    for (const auto& [group, repl] : repl_map.items()) {
      if (!lex.group_words_.count(group)) {
        throw ConfigError("counterpart of \"" + word +
                          "\" names unknown group \"" + group + "\" (" + origin +
                          ")");
      }
      if (!repl.is_string()) {
        throw ConfigError("counterpart of \"" + word + "\" toward \"" + group +
                          "\" must be a string (" + origin + ")");
      }
      const std::string canon = canonical_word(repl.get<std::string>(), origin);
      const auto it = lex.word_group_.find(canon);
      if (it == lex.word_group_.end() || it->second != group) {
        throw ConfigError("counterpart \"" + canon + "\" of \"" + word +
                          "\" is not a declared word of group \"" + group +
                          "\" (" + origin + ")");
      }
      slot[group] = canon;
    }
  }

  // Every word must map toward every group, and substitution toward a
  // word's own group must be the identity (this is what makes repeated
  // substitution stable).
  for (const auto& [word, group] : lex.word_group_) {
    const auto it = lex.counterparts_.find(word);
    for (const auto& g : lex.group_order_) {
      if (it == lex.counterparts_.end() || !it->second.count(g)) {
        throw ConfigError("word \"" + word + "\" has no counterpart for group \"" +
                          g + "\" (" + origin + ")");
      }
    }
    if (it->second.at(group) != word) {
      throw ConfigError("counterpart of \"" + word + "\" toward its own group \"" +
                        group + "\" must be the word itself (" + origin + ")");
    }
  }

  // Index phrases by first token, longest first (ties lexicographic, for
  // a deterministic scan).
  for (const auto& [word, group] : lex.word_group_) {
    std::vector<std::string> parts;
    std::istringstream ss(word);
    std::string tok;
    while (ss >> tok) parts.push_back(tok);
    lex.max_phrase_tokens_ = std::max(lex.max_phrase_tokens_, parts.size());
    lex.phrase_index_[parts[0]].emplace_back(std::move(parts), word);
  }
  for (auto& [first, bucket] : lex.phrase_index_) {
    std::sort(bucket.begin(), bucket.end(), [](const auto& a, const auto& b) {
      if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
      return a.second < b.second;
    });
  }
  return lex;
}

AttributeLexicon AttributeLexicon::from_file(const std::filesystem::path& path) {
  return from_json_text(read_text_file(path), path.string());
}

const AttributeLexicon& AttributeLexicon::builtin_gender() {
  static const AttributeLexicon lex =
      from_json_text(builtin::gender_lexicon_json(), "<builtin gender>");
  return lex;
}

const AttributeLexicon& AttributeLexicon::builtin_race() {
  static const AttributeLexicon lex =
      from_json_text(builtin::race_lexicon_json(), "<builtin race>");
  return lex;
}

const AttributeLexicon& AttributeLexicon::builtin(std::string_view attribute) {
  if (attribute == "gender") return builtin_gender();
  if (attribute == "race") return builtin_race();
  throw ConfigError("no built-in lexicon named \"" + std::string(attribute) +
                    "\" (available: gender, race)");
}

bool AttributeLexicon::has_group(const std::string& group) const {
  return group_words_.count(group) > 0;
}

const std::vector<std::string>& AttributeLexicon::words(
    const std::string& group) const {
  const auto it = group_words_.find(group);
  if (it == group_words_.end()) {
    throw ConfigError("unknown group \"" + group + "\" for attribute \"" +
                      attribute_ + "\"");
  }
  return it->second;
}

std::optional<std::string> AttributeLexicon::group_of(
    const std::string& word) const {
  const auto it = word_group_.find(word);
  if (it == word_group_.end()) return std::nullopt;
  return it->second;
}

const std::string& AttributeLexicon::counterpart(const std::string& word,
                                                 const std::string& group) const {
  const auto it = counterparts_.find(word);
  if (it == counterparts_.end()) {
    throw ConfigError("word \"" + word + "\" has no counterpart table");
  }
  const auto jt = it->second.find(group);
  if (jt == it->second.end()) {
    throw ConfigError("word \"" + word + "\" has no counterpart for group \"" +
                      group + "\"");
  }
  return jt->second;
}

const std::vector<std::pair<std::vector<std::string>, std::string>>&
AttributeLexicon::phrases_starting_with(const std::string& first_token) const {
  static const std::vector<std::pair<std::vector<std::string>, std::string>> empty;
  const auto it = phrase_index_.find(first_token);
  return it == phrase_index_.end() ? empty : it->second;
}

std::vector<TokenAttributeMatch> find_attribute_token_matches(
    std::span<const std::string> tokens, const AttributeLexicon& lexicon) {
  std::vector<TokenAttributeMatch> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const auto& bucket = lexicon.phrases_starting_with(tokens[i]);
    bool matched = false;
    for (const auto& [parts, word] : bucket) {
      if (i + parts.size() > tokens.size()) continue;
      bool eq = true;
      for (std::size_t k = 1; k < parts.size(); ++k) {
        if (tokens[i + k] != parts[k]) {
          eq = false;
          break;
        }
      }
      if (!eq) continue;
      out.push_back(TokenAttributeMatch{i, i + parts.size(), word,
                                        *lexicon.group_of(word)});
      i += parts.size();
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return out;
}

std::vector<AttributeMatch> find_attribute_matches(std::string_view text,
                                                   const AttributeLexicon& lexicon) {
  const auto spans = tokenize_with_spans(text);
  std::vector<std::string> tokens;
  tokens.reserve(spans.size());
  for (const auto& t : spans) tokens.push_back(t.text);
  std::vector<AttributeMatch> out;
  for (const auto& tm : find_attribute_token_matches(tokens, lexicon)) {
    out.push_back(AttributeMatch{spans[tm.token_begin].begin,
                                 spans[tm.token_end - 1].end, tm.word, tm.group});
  }
  return out;
}

FtuReport check_ftu(std::span<const PromptRecord> prompts,
                    const AttributeLexicon& lexicon) {
  FtuReport report;
  report.attribute = lexicon.attribute();
  report.groups = lexicon.group_order();
  for (const auto& p : prompts) {
    const auto matches = find_attribute_matches(p.text, lexicon);
    if (matches.empty()) continue;
    auto& counts = report.per_prompt[p.id];
    for (const auto& m : matches) {
      ++counts[m.group];
      ++report.total_matches;
    }
  }
  report.satisfied = report.total_matches == 0;
  return report;
}

namespace {

std::string substitute_matches(std::string_view text,
                               std::span<const AttributeMatch> matches,
                               const std::string& group,
                               const AttributeLexicon& lexicon) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  for (const auto& m : matches) {
    out.append(text.substr(pos, m.begin - pos));
    const std::string& replacement = lexicon.counterpart(m.word, group);
    out.append(mirror_case(text.substr(m.begin, m.end - m.begin), replacement));
    pos = m.end;
  }
  out.append(text.substr(pos));
  return out;
}

}  // namespace

std::string substitute_toward(std::string_view text, const std::string& group,
                              const AttributeLexicon& lexicon) {
  if (!lexicon.has_group(group)) {
    throw ConfigError("unknown group \"" + group + "\" for attribute \"" +
                      lexicon.attribute() + "\"");
  }
  const auto matches = find_attribute_matches(text, lexicon);
  return substitute_matches(text, matches, group, lexicon);
}

CounterfactualBuild build_counterfactual_sets(std::span<const PromptRecord> prompts,
                                              const AttributeLexicon& lexicon) {
  CounterfactualBuild build;
  for (const auto& p : prompts) {
    const auto matches = find_attribute_matches(p.text, lexicon);
    if (matches.empty()) {
      build.skipped.push_back(p.id);
      continue;
    }
    CounterfactualSet set;
    set.prompt_id = p.id;
    for (const auto& group : lexicon.group_order()) {
      set.variants[group] = substitute_matches(p.text, matches, group, lexicon);
    }
    build.sets.push_back(std::move(set));
  }
  return build;
}

}  // namespace fairaudit
