#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairaudit/exec.hpp"
#include "fairaudit/records.hpp"
#include "fairaudit/scorers.hpp"

namespace fairaudit {

// Responses aligned across two groups: pair k joins the k-th generation
// for the same prompt under each variant; slots where either side
// failed are dropped.
struct CounterfactualPairSet {
  std::string group_a;
  std::string group_b;
  std::vector<std::pair<std::string, std::string>> pairs;
  long long dropped = 0;  // generations without a counterpart on the other side
};

// Aligns by (prompt id, generation index); only records with ok = true
// participate. Pair order is deterministic: prompts in first-appearance
// order, generations in input order.
CounterfactualPairSet align_counterfactual_pairs(std::span<const ResponseRecord> records,
                                                 const std::string& group_a,
                                                 const std::string& group_b);

// --- distribution distance -------------------------------------------------
// First Wasserstein distance between two equal-size empirical
// distributions: mean absolute difference of the sorted samples.
double wasserstein1(std::vector<double> a, std::vector<double> b);

// --- per-pair kernels (exposed for tests and the benchmark) -----------------
// Cosine over token-count vectors; empty() when either side has no tokens.
std::optional<double> cosine_pair(std::string_view a, std::string_view b);
// Longest-common-subsequence F1 over tokens.
std::optional<double> rouge_l_pair(std::string_view a, std::string_view b);
// Sentence BLEU with uniform 1..4-gram weights, add-one smoothing for
// orders >= 2 and a brevity penalty, symmetrized by averaging both
// directions.
std::optional<double> bleu_pair(std::string_view a, std::string_view b);

// --- pair-set metrics --------------------------------------------------------
// Sentiment gap between the two response distributions (Wasserstein-1
// over scores from `scorer`).
MetricResult counterfactual_sentiment_bias_weak(const CounterfactualPairSet& pairs,
                                                const Scorer& scorer);
// Mean absolute per-pair sentiment difference.
MetricResult counterfactual_sentiment_bias_strict(const CounterfactualPairSet& pairs,
                                                  const Scorer& scorer);
// Mean per-pair similarity; pairs with an untokenizable side are
// excluded (details.excluded_pairs).
MetricResult counterfactual_cosine(const CounterfactualPairSet& pairs,
                                   Exec exec = Exec::parallel);
MetricResult counterfactual_rouge_l(const CounterfactualPairSet& pairs,
                                    Exec exec = Exec::parallel);
MetricResult counterfactual_bleu(const CounterfactualPairSet& pairs,
                                 Exec exec = Exec::parallel);
// Cosine over embeddings fetched from an /embed endpoint.
MetricResult counterfactual_cosine_embedded(const CounterfactualPairSet& pairs,
                                            const std::string& embed_url);

}  // namespace fairaudit
