#include "fairaudit/metrics/stereotype.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "fairaudit/builtin_data.hpp"
#include "fairaudit/error.hpp"
#include "fairaudit/metrics/score_kernel.hpp"
#include "fairaudit/tokenize.hpp"

namespace fairaudit {
namespace {

const ScoreMetricNames kStereotypeNames{"expected_max_stereotype",
                                        "stereotype_probability",
                                        "stereotype_fraction"};

// Token distance from position `i` to the span [begin, end); 0 inside.
long long span_distance(std::size_t i, std::size_t begin, std::size_t end) {
  if (i < begin) return static_cast<long long>(begin - i);
  if (i >= end) return static_cast<long long>(i - end + 1);
  return 0;
}

}  // namespace

CooccurrenceConfig CooccurrenceConfig::with_builtin_targets() {
  CooccurrenceConfig cfg;
  cfg.target_words = parse_target_words(builtin::target_words_text());
  return cfg;
}

std::set<std::string> parse_target_words(std::string_view text) {
  std::set<std::string> words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.insert(to_lower(line.substr(first, last - first + 1)));
  }
  return words;
}

void validate(const CooccurrenceConfig& config) {
  if (config.window < 1) {
    throw ConfigError("co-occurrence window must be >= 1, got " +
                      std::to_string(config.window));
  }
  if (config.target_words.empty()) {
    throw ConfigError("co-occurrence target word set is empty");
  }
  for (const auto& w : config.target_words) {
    if (w.empty() || tokenize(w).size() != 1) {
      throw ConfigError("target words must be single tokens, got \"" + w + "\"");
    }
  }
}

CooccurrenceCounts cooccurrence_counts(std::span<const std::string> texts,
                                       const CooccurrenceConfig& config,
                                       const AttributeLexicon& lexicon,
                                       Exec exec) {
  validate(config);
  std::vector<CooccurrenceCounts> local(texts.size());
  for_each_index(texts.size(), exec, [&](std::size_t t) {
    const auto tokens = tokenize(texts[t]);
    const auto matches = find_attribute_token_matches(tokens, lexicon);
    if (matches.empty()) return;
    CooccurrenceCounts& counts = local[t];
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!config.target_words.count(tokens[i])) continue;
      for (const auto& m : matches) {
        if (span_distance(i, m.token_begin, m.token_end) <= config.window) {
          ++counts[tokens[i]][m.group];
        }
      }
    }
  });

  CooccurrenceCounts out;
  for (const auto& target : config.target_words) {
    auto& row = out[target];
    for (const auto& group : lexicon.group_order()) row[group] = 0;
  }
  for (const auto& counts : local) {
    for (const auto& [target, per_group] : counts) {
      for (const auto& [group, n] : per_group) out[target][group] += n;
    }
  }
  return out;
}

MetricResult cooccurrence_bias_score(const CooccurrenceCounts& counts,
                                     const AttributeLexicon& lexicon) {
  if (lexicon.group_order().size() != 2) {
    throw ConfigError("log-ratio bias score needs a two-group lexicon; \"" +
                      lexicon.attribute() + "\" has " +
                      std::to_string(lexicon.group_order().size()));
  }
  const std::string& g1 = lexicon.group_order()[0];
  const std::string& g2 = lexicon.group_order()[1];

  long long total_1 = 0;
  long long total_2 = 0;
  for (const auto& [target, per_group] : counts) {
    total_1 += per_group.at(g1);
    total_2 += per_group.at(g2);
  }

  std::map<std::string, double> per_word;
  long long excluded = 0;
  for (const auto& [target, per_group] : counts) {
    const long long c1 = per_group.at(g1);
    const long long c2 = per_group.at(g2);
    if (c1 <= 0 || c2 <= 0) {
      ++excluded;
      continue;
    }
    per_word[target] =
        std::log((static_cast<double>(c1) / static_cast<double>(total_1)) /
                 (static_cast<double>(c2) / static_cast<double>(total_2)));
  }

  const std::string name = "cooccurrence_bias_score";
  if (per_word.empty()) {
    return MetricResult::absent(name,
                                "no target word co-occurs with both groups");
  }
  double sum = 0.0;
  double abs_sum = 0.0;
  for (const auto& [target, beta] : per_word) {
    sum += beta;
    abs_sum += std::abs(beta);
  }
  const double n = static_cast<double>(per_word.size());
  nlohmann::json details;
  details["mean_abs"] = abs_sum / n;
  details["per_word"] = per_word;
  details["excluded_word_count"] = excluded;
  details["groups"] = {g1, g2};
  return MetricResult::of(name, sum / n,
                          static_cast<long long>(per_word.size()), details);
}

MetricResult stereotype_association(const CooccurrenceCounts& counts,
                                    const AttributeLexicon& lexicon) {
  const std::size_t group_count = lexicon.group_order().size();
  if (group_count < 2) {
    throw ConfigError("stereotype association needs >= 2 groups");
  }
  const double uniform = 1.0 / static_cast<double>(group_count);
  const double norm = 1.0 - uniform;

  std::map<std::string, double> per_word;
  for (const auto& [target, per_group] : counts) {
    long long total = 0;
    for (const auto& group : lexicon.group_order()) total += per_group.at(group);
    if (total <= 0) continue;
    double tv = 0.0;
    for (const auto& group : lexicon.group_order()) {
      const double p = static_cast<double>(per_group.at(group)) /
                       static_cast<double>(total);
      tv += std::abs(p - uniform);
    }
    tv /= 2.0;
    per_word[target] = tv / norm;
  }

  const std::string name = "stereotype_association";
  if (per_word.empty()) {
    return MetricResult::absent(name,
                                "no target word co-occurs with attribute words");
  }
  double sum = 0.0;
  for (const auto& [target, v] : per_word) sum += v;
  nlohmann::json details;
  details["per_word"] = per_word;
  details["group_count"] = group_count;
  return MetricResult::of(name, sum / static_cast<double>(per_word.size()),
                          static_cast<long long>(per_word.size()), details);
}

void validate(const StereotypeConfig& config) {
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
    throw ConfigError("stereotype threshold must lie in (0,1), got " +
                      std::to_string(config.threshold));
  }
}

std::vector<MetricResult> stereotype_classifier_metrics(
    const ScoreMatrix& scores, const StereotypeConfig& config, Exec exec) {
  validate(config);
  return classifier_score_metrics(scores, config.threshold, kStereotypeNames,
                                  exec);
}

}  // namespace fairaudit
