#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairaudit/exec.hpp"
#include "fairaudit/lexicon.hpp"
#include "fairaudit/llm_client.hpp"
#include "fairaudit/metrics/stereotype.hpp"
#include "fairaudit/records.hpp"
#include "fairaudit/report.hpp"
#include "fairaudit/score_matrix.hpp"
#include "fairaudit/scorers.hpp"

namespace fairaudit {

// What a run will compute, decided from the unawareness check: toxicity
// and stereotype metrics always run; counterfactual metrics run only
// when at least one attribute check found matches.
// counterfactual_groups lists the group names of every attribute that
// triggered, in declaration order; empty when the check is satisfied.
struct AutoEvalPlan {
  bool ftu_satisfied = true;
  std::vector<std::string> metrics_selected;
  std::vector<std::string> counterfactual_groups;

  friend bool operator==(const AutoEvalPlan&, const AutoEvalPlan&) = default;
};

AutoEvalPlan plan(const FtuReport& ftu);
AutoEvalPlan plan(std::span<const FtuReport> ftu_reports);

struct AutoEvalConfig {
  GenerationConfig generation;
  ScorerSpec toxicity_scorer;
  ScorerSpec stereotype_scorer;
  ScorerSpec sentiment_scorer = ScorerSpec::builtin_sentiment();
  // Attributes to audit; empty means the built-in gender and race
  // lexicons.
  std::vector<AttributeLexicon> lexicons;
  double toxicity_threshold = 0.5;
  double stereotype_threshold = 0.5;
  CooccurrenceConfig cooccurrence = CooccurrenceConfig::with_builtin_targets();
  std::optional<std::string> embedding_url;  // enables embedding cosine
  Exec exec = Exec::parallel;
};

// The whole pipeline: check unawareness, plan, generate (plus
// counterfactual variants when planned), score, compute every planned
// metric family, assemble the report. Configuration errors throw before
// any generation; a scorer failure voids only the metrics depending on
// it, recording the reason in the report.
AutoEvalReport evaluate(std::span<const PromptRecord> prompts,
                        const AutoEvalConfig& config);

// Scores the responses of ok records and lays them out as a prompt x
// generation matrix (row order: first appearance of each prompt id).
// Failed generations stay absent.
ScoreMatrix score_response_records(std::span<const ResponseRecord> records,
                                   const Scorer& scorer);

// Family builders shared by the orchestrator and the offline CLI path.
// A scorer failure makes the toxicity family absent as a whole; in the
// stereotype family it only voids the three classifier results, since
// the co-occurrence metrics never touch a scorer.
MetricFamily toxicity_family(std::span<const ResponseRecord> records,
                             const Scorer& scorer, double threshold, Exec exec);
MetricFamily stereotype_family(std::span<const ResponseRecord> records,
                               const Scorer& scorer, double threshold,
                               const CooccurrenceConfig& cooccurrence,
                               std::span<const AttributeLexicon> lexicons,
                               Exec exec);

// Counterfactual metrics for every group pair of one attribute, aligned
// from labeled response records. Sentiment scorer or embedding failures
// void only the affected results.
std::vector<CounterfactualComparison> counterfactual_comparisons(
    std::span<const ResponseRecord> records, const AttributeLexicon& lexicon,
    const Scorer& sentiment_scorer,
    const std::optional<std::string>& embedding_url, Exec exec);

}  // namespace fairaudit
