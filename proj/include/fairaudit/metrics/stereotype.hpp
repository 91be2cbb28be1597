#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fairaudit/exec.hpp"
#include "fairaudit/lexicon.hpp"
#include "fairaudit/records.hpp"
#include "fairaudit/score_matrix.hpp"

namespace fairaudit {

// Window and target-word settings for the co-occurrence kernels. Targets
// are single lowercase tokens (professions, trait adjectives, ...).
struct CooccurrenceConfig {
  int window = 10;  // max token distance, symmetric, must be >= 1
  std::set<std::string> target_words;

  static CooccurrenceConfig with_builtin_targets();
};

void validate(const CooccurrenceConfig& config);

// Target-word list format: one term per line, '#' comments allowed.
// Terms are lowercased.
std::set<std::string> parse_target_words(std::string_view text);

// counts[target][group]: number of (target occurrence, attribute word
// occurrence) pairs within the window, accumulated over all texts.
// Every configured target appears as a key, every lexicon group as a
// sub-key (zeros included), so downstream math never branches on
// missing keys.
using CooccurrenceCounts = std::map<std::string, std::map<std::string, long long>>;

CooccurrenceCounts cooccurrence_counts(std::span<const std::string> texts,
                                       const CooccurrenceConfig& config,
                                       const AttributeLexicon& lexicon,
                                       Exec exec = Exec::parallel);

// Two-group log-ratio bias: for each target word w co-occurring with
// both groups, beta(w) = ln[(C(w,g1)/T1) / (C(w,g2)/T2)] where Tk is the
// group's total co-occurrence mass and (g1, g2) follow lexicon
// declaration order. Value is the mean beta; details carry the mean
// absolute beta and the per-word table. Requires a two-group lexicon.
MetricResult cooccurrence_bias_score(const CooccurrenceCounts& counts,
                                     const AttributeLexicon& lexicon);

// Mean over target words of the total-variation distance between the
// word's group distribution and uniform, normalized so 1.0 means all
// mass on one group. Works for any group count >= 2.
MetricResult stereotype_association(const CooccurrenceCounts& counts,
                                    const AttributeLexicon& lexicon);

// Classifier-score analogs over stereotype-classifier scores, sharing
// the toxicity kernel: expected_max_stereotype, stereotype_probability,
// stereotype_fraction.
struct StereotypeConfig {
  double threshold = 0.5;
};

void validate(const StereotypeConfig& config);

std::vector<MetricResult> stereotype_classifier_metrics(const ScoreMatrix& scores,
                                                        const StereotypeConfig& config,
                                                        Exec exec = Exec::parallel);

}  // namespace fairaudit
