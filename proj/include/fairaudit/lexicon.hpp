#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairaudit/records.hpp"

namespace fairaudit {

// A protected attribute with an ordered list of groups, the words that
// signal each group, and for every word its counterpart in every group.
// Group declaration order is preserved: it fixes the sign convention of
// the two-group log-ratio bias score and the order of report columns.
class AttributeLexicon {
 public:
  static AttributeLexicon from_json_text(std::string_view text,
                                         const std::string& origin = "<inline>");
  static AttributeLexicon from_file(const std::filesystem::path& path);

  // Built-in lexicons compiled into the library ("gender", "race").
  static const AttributeLexicon& builtin_gender();
  static const AttributeLexicon& builtin_race();
  static const AttributeLexicon& builtin(std::string_view attribute);

  const std::string& attribute() const { return attribute_; }
  const std::vector<std::string>& group_order() const { return group_order_; }
  bool has_group(const std::string& group) const;
  const std::vector<std::string>& words(const std::string& group) const;

  // The group a word belongs to; empty when the word is not in the
  // lexicon. Words are canonical lowercase, phrases space-joined.
  std::optional<std::string> group_of(const std::string& word) const;

  // The counterpart of `word` in `group` (identity when the word is
  // already in that group). Every lexicon word maps for every group.
  const std::string& counterpart(const std::string& word,
                                 const std::string& group) const;

  // Longest phrase length in tokens (for the matcher).
  std::size_t max_phrase_tokens() const { return max_phrase_tokens_; }

  // Phrases starting with `first_token`, longest first, as (token
  // sequence, canonical word) pairs.
  const std::vector<std::pair<std::vector<std::string>, std::string>>&
  phrases_starting_with(const std::string& first_token) const;

 private:
  std::string attribute_;
  std::vector<std::string> group_order_;
  std::map<std::string, std::vector<std::string>> group_words_;
  std::map<std::string, std::string> word_group_;
  std::map<std::string, std::map<std::string, std::string>> counterparts_;
  std::map<std::string, std::vector<std::pair<std::vector<std::string>, std::string>>>
      phrase_index_;
  std::size_t max_phrase_tokens_ = 0;
};

// One occurrence of a lexicon word in a text: byte span, canonical
// lowercase word, owning group.
struct AttributeMatch {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string word;
  std::string group;

  friend bool operator==(const AttributeMatch&, const AttributeMatch&) = default;
};

// A word occurrence located in token space (used by the co-occurrence
// kernels, where distances are measured in tokens).
struct TokenAttributeMatch {
  std::size_t token_begin = 0;  // first token index
  std::size_t token_end = 0;    // one past the last token index
  std::string word;
  std::string group;
};

// Case-insensitive, word-boundary matching. Multi-word phrases win over
// shorter prefixes; matches never overlap (left to right, longest first).
std::vector<AttributeMatch> find_attribute_matches(std::string_view text,
                                                   const AttributeLexicon& lexicon);
std::vector<TokenAttributeMatch> find_attribute_token_matches(
    std::span<const std::string> tokens, const AttributeLexicon& lexicon);

// Result of scanning a prompt set for attribute words: per-prompt counts
// by group (prompts with no matches are omitted), the dataset total, and
// whether the set passes the unawareness check (total == 0).
struct FtuReport {
  std::string attribute;
  std::vector<std::string> groups;
  std::map<std::string, std::map<std::string, long long>> per_prompt;
  long long total_matches = 0;
  bool satisfied = true;

  friend bool operator==(const FtuReport&, const FtuReport&) = default;
};

FtuReport check_ftu(std::span<const PromptRecord> prompts,
                    const AttributeLexicon& lexicon);

// One prompt expanded into per-group variants. Variant texts differ from
// the original only at matched attribute words.
struct CounterfactualSet {
  std::string prompt_id;
  std::map<std::string, std::string> variants;

  friend bool operator==(const CounterfactualSet&, const CounterfactualSet&) = default;
};

struct CounterfactualBuild {
  std::vector<CounterfactualSet> sets;
  std::vector<std::string> skipped;  // prompt ids with no attribute words
};

// Builds one variant per lexicon group for every prompt that contains at
// least one attribute word. Replacements mirror the original casing
// (all-caps and initial-cap are preserved).
CounterfactualBuild build_counterfactual_sets(std::span<const PromptRecord> prompts,
                                              const AttributeLexicon& lexicon);

// Rewrites a single text toward one group. Applying it twice gives the
// same result as applying it once.
std::string substitute_toward(std::string_view text, const std::string& group,
                              const AttributeLexicon& lexicon);

}  // namespace fairaudit
