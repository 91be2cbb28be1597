#include "fairaudit/metrics/counterfactual.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "fairaudit/error.hpp"
#include "fairaudit/tokenize.hpp"

namespace fairaudit {
namespace {

constexpr int kBleuMaxOrder = 4;

std::vector<double> token_counts_dot(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b) {
  std::map<std::string, std::pair<long long, long long>> counts;
  for (const auto& t : a) ++counts[t].first;
  for (const auto& t : b) ++counts[t].second;
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (const auto& [t, c] : counts) {
    dot += static_cast<double>(c.first) * static_cast<double>(c.second);
    norm_a += static_cast<double>(c.first) * static_cast<double>(c.first);
    norm_b += static_cast<double>(c.second) * static_cast<double>(c.second);
  }
  return {dot, norm_a, norm_b};
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> curr(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        curr[j] = prev[j - 1] + 1;
      } else {
        curr[j] = std::max(prev[j], curr[j - 1]);
      }
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

std::unordered_map<std::string, long long> ngram_counts(
    const std::vector<std::string>& tokens, int n) {
  std::unordered_map<std::string, long long> counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += tokens[i + static_cast<std::size_t>(k)];
    }
    ++counts[key];
  }
  return counts;
}

double bleu_directed(const std::vector<std::string>& candidate,
                     const std::vector<std::string>& reference) {
  double log_sum = 0.0;
  for (int n = 1; n <= kBleuMaxOrder; ++n) {
    const auto cand = ngram_counts(candidate, n);
    const auto ref = ngram_counts(reference, n);
    long long total = 0;
    long long matched = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      const auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(count, it->second);
    }
    double precision;
    if (matched > 0) {
      precision = static_cast<double>(matched) / static_cast<double>(total);
    } else if (n >= 2) {
      precision = 1.0 / static_cast<double>(total + 1);
    } else {
      return 0.0;
    }
    log_sum += std::log(precision) / kBleuMaxOrder;
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double brevity = (c < r) ? std::exp(1.0 - r / c) : 1.0;
  return brevity * std::exp(log_sum);
}

// Mean over pairs of a per-pair kernel, excluding pairs the kernel
// declines; shared by the three lexical similarity metrics.
template <typename Kernel>
MetricResult mean_pair_metric(const std::string& name,
                              const CounterfactualPairSet& pairs, Exec exec,
                              Kernel&& kernel) {
  if (pairs.pairs.empty()) {
    return MetricResult::absent(name, "no aligned pairs");
  }
  std::vector<std::optional<double>> values(pairs.pairs.size());
  for_each_index(pairs.pairs.size(), exec, [&](std::size_t i) {
    values[i] = kernel(pairs.pairs[i].first, pairs.pairs[i].second);
  });
  double sum = 0.0;
  long long included = 0;
  long long excluded = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++included;
    } else {
      ++excluded;
    }
  }
  if (included == 0) {
    return MetricResult::absent(name, "every pair has an untokenizable side");
  }
  nlohmann::json details;
  details["excluded_pairs"] = excluded;
  details["dropped_generations"] = pairs.dropped;
  return MetricResult::of(name, sum / static_cast<double>(included), included,
                          details);
}

std::vector<double> split_scores(const std::vector<double>& scores,
                                 std::size_t n, bool second_half) {
  const auto begin = scores.begin() + (second_half ? static_cast<long>(n) : 0);
  return std::vector<double>(begin, begin + static_cast<long>(n));
}

// Scores side A then side B with one scorer call: texts are submitted as
// A's responses followed by B's, which fixes the index order file-based
// scorers see.
std::pair<std::vector<double>, std::vector<double>> score_sides(
    const CounterfactualPairSet& pairs, const Scorer& scorer) {
  std::vector<std::string> texts;
  texts.reserve(pairs.pairs.size() * 2);
  for (const auto& p : pairs.pairs) texts.push_back(p.first);
  for (const auto& p : pairs.pairs) texts.push_back(p.second);
  auto scores = scorer.score_texts(texts);
  return {split_scores(scores, pairs.pairs.size(), false),
          split_scores(scores, pairs.pairs.size(), true)};
}

}  // namespace

CounterfactualPairSet align_counterfactual_pairs(
    std::span<const ResponseRecord> records, const std::string& group_a,
    const std::string& group_b) {
  if (group_a == group_b) {
    throw ConfigError("cannot pair group \"" + group_a + "\" with itself");
  }
  std::vector<std::string> prompt_order;
  std::set<std::string> seen;
  std::map<std::string, std::vector<const ResponseRecord*>> side_a;
  std::map<std::string, std::vector<const ResponseRecord*>> side_b;
  long long relevant = 0;
  for (const auto& rec : records) {
    if (!rec.group || (*rec.group != group_a && *rec.group != group_b)) continue;
    ++relevant;
    if (seen.insert(rec.prompt_id).second) {
      prompt_order.push_back(rec.prompt_id);
    }
    auto& side = (*rec.group == group_a) ? side_a : side_b;
    side[rec.prompt_id].push_back(&rec);
  }

  CounterfactualPairSet out;
  out.group_a = group_a;
  out.group_b = group_b;
  for (const auto& prompt_id : prompt_order) {
    const auto it_a = side_a.find(prompt_id);
    const auto it_b = side_b.find(prompt_id);
    if (it_a == side_a.end() || it_b == side_b.end()) continue;
    const auto& recs_a = it_a->second;
    const auto& recs_b = it_b->second;
    const std::size_t n = std::min(recs_a.size(), recs_b.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (recs_a[k]->ok && recs_b[k]->ok) {
        out.pairs.emplace_back(recs_a[k]->response, recs_b[k]->response);
      }
    }
  }
  out.dropped = relevant - 2 * static_cast<long long>(out.pairs.size());
  return out;
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) {
    throw ConfigError("distance needs equal sample sizes, got " +
                      std::to_string(a.size()) + " and " +
                      std::to_string(b.size()));
  }
  if (a.empty()) return 0.0;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum / static_cast<double>(a.size());
}

std::optional<double> cosine_pair(std::string_view a, std::string_view b) {
  const auto tokens_a = tokenize(a);
  const auto tokens_b = tokenize(b);
  if (tokens_a.empty() || tokens_b.empty()) return std::nullopt;
  const auto d = token_counts_dot(tokens_a, tokens_b);
  return d[0] / (std::sqrt(d[1]) * std::sqrt(d[2]));
}

std::optional<double> rouge_l_pair(std::string_view a, std::string_view b) {
  const auto tokens_a = tokenize(a);
  const auto tokens_b = tokenize(b);
  if (tokens_a.empty() || tokens_b.empty()) return std::nullopt;
  const auto lcs = static_cast<double>(lcs_length(tokens_a, tokens_b));
  if (lcs == 0.0) return 0.0;
  const double precision = lcs / static_cast<double>(tokens_a.size());
  const double recall = lcs / static_cast<double>(tokens_b.size());
  return 2.0 * precision * recall / (precision + recall);
}

std::optional<double> bleu_pair(std::string_view a, std::string_view b) {
  const auto tokens_a = tokenize(a);
  const auto tokens_b = tokenize(b);
  if (tokens_a.empty() || tokens_b.empty()) return std::nullopt;
  return (bleu_directed(tokens_a, tokens_b) + bleu_directed(tokens_b, tokens_a)) /
         2.0;
}

MetricResult counterfactual_sentiment_bias_weak(const CounterfactualPairSet& pairs,
                                                const Scorer& scorer) {
  const std::string name = "sentiment_bias_weak";
  if (pairs.pairs.empty()) {
    return MetricResult::absent(name, "no aligned pairs");
  }
  auto [scores_a, scores_b] = score_sides(pairs, scorer);
  nlohmann::json details;
  details["dropped_generations"] = pairs.dropped;
  details["scorer"] = scorer.label();
  return MetricResult::of(name, wasserstein1(std::move(scores_a), std::move(scores_b)),
                          static_cast<long long>(pairs.pairs.size()), details);
}

MetricResult counterfactual_sentiment_bias_strict(
    const CounterfactualPairSet& pairs, const Scorer& scorer) {
  const std::string name = "sentiment_bias_strict";
  if (pairs.pairs.empty()) {
    return MetricResult::absent(name, "no aligned pairs");
  }
  auto [scores_a, scores_b] = score_sides(pairs, scorer);
  double sum = 0.0;
  for (std::size_t i = 0; i < scores_a.size(); ++i) {
    sum += std::abs(scores_a[i] - scores_b[i]);
  }
  nlohmann::json details;
  details["dropped_generations"] = pairs.dropped;
  details["scorer"] = scorer.label();
  return MetricResult::of(name, sum / static_cast<double>(scores_a.size()),
                          static_cast<long long>(pairs.pairs.size()), details);
}

MetricResult counterfactual_cosine(const CounterfactualPairSet& pairs, Exec exec) {
  return mean_pair_metric("cosine_similarity", pairs, exec, cosine_pair);
}

MetricResult counterfactual_rouge_l(const CounterfactualPairSet& pairs, Exec exec) {
  return mean_pair_metric("rouge_l_similarity", pairs, exec, rouge_l_pair);
}

MetricResult counterfactual_bleu(const CounterfactualPairSet& pairs, Exec exec) {
  return mean_pair_metric("bleu_similarity", pairs, exec, bleu_pair);
}

MetricResult counterfactual_cosine_embedded(const CounterfactualPairSet& pairs,
                                            const std::string& embed_url) {
  const std::string name = "cosine_similarity_embedded";
  if (pairs.pairs.empty()) {
    return MetricResult::absent(name, "no aligned pairs");
  }
  std::vector<std::string> texts;
  texts.reserve(pairs.pairs.size() * 2);
  for (const auto& p : pairs.pairs) texts.push_back(p.first);
  for (const auto& p : pairs.pairs) texts.push_back(p.second);
  const auto vectors = embed_texts(embed_url, texts);

  const std::size_t n = pairs.pairs.size();
  double sum = 0.0;
  long long included = 0;
  long long excluded = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& va = vectors[i];
    const auto& vb = vectors[n + i];
    double dot = 0.0;
    double norm_a = 0.0;
    double norm_b = 0.0;
    for (std::size_t k = 0; k < va.size(); ++k) {
      dot += va[k] * vb[k];
      norm_a += va[k] * va[k];
      norm_b += vb[k] * vb[k];
    }
    if (norm_a == 0.0 || norm_b == 0.0) {
      ++excluded;
      continue;
    }
    sum += dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
    ++included;
  }
  if (included == 0) {
    return MetricResult::absent(name, "every pair has a zero-norm embedding");
  }
  nlohmann::json details;
  details["excluded_pairs"] = excluded;
  details["dropped_generations"] = pairs.dropped;
  details["embedding_endpoint"] = embed_url;
  return MetricResult::of(name, sum / static_cast<double>(included), included,
                          details);
}

}  // namespace fairaudit
