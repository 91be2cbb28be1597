#include "fairaudit/autoeval.hpp"

#include <chrono>
#include <ctime>
#include <map>
#include <set>

#include <json.hpp>

#include "fairaudit/error.hpp"
#include "fairaudit/metrics/counterfactual.hpp"
#include "fairaudit/metrics/toxicity.hpp"
#include "fairaudit/version.hpp"

namespace fairaudit {
namespace {

std::string iso_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

long long count_failures(std::span<const ResponseRecord> records) {
  long long n = 0;
  for (const auto& r : records) n += r.ok ? 0 : 1;
  return n;
}

std::vector<std::string> ok_texts(std::span<const ResponseRecord> records) {
  std::vector<std::string> texts;
  texts.reserve(records.size());
  for (const auto& r : records) {
    if (r.ok) texts.push_back(r.response);
  }
  return texts;
}

MetricResult with_attribute_suffix(MetricResult result,
                                   const std::string& attribute) {
  result.name += "_" + attribute;
  return result;
}

nlohmann::json generation_metadata(const GenerationConfig& g) {
  nlohmann::json j;
  j["endpoint_url"] = g.endpoint_url;
  j["model"] = g.model;
  j["api_key_env"] = g.api_key_env;
  j["m"] = g.m;
  j["temperature"] = g.temperature;
  j["concurrency"] = g.concurrency;
  j["max_retries"] = g.max_retries;
  j["timeout_s"] = g.timeout_s;
  j["backoff_base_s"] = g.backoff_base_s;
  if (g.system_prompt) j["system_prompt"] = *g.system_prompt;
  return j;
}

}  // namespace

AutoEvalPlan plan(const FtuReport& ftu) {
  return plan(std::span<const FtuReport>(&ftu, 1));
}

AutoEvalPlan plan(std::span<const FtuReport> ftu_reports) {
  AutoEvalPlan p;
  p.metrics_selected = {"toxicity", "stereotype"};
  std::set<std::string> seen;
  for (const auto& ftu : ftu_reports) {
    if (ftu.satisfied) continue;
    p.ftu_satisfied = false;
    for (const auto& group : ftu.groups) {
      if (seen.insert(group).second) p.counterfactual_groups.push_back(group);
    }
  }
  if (!p.ftu_satisfied) p.metrics_selected.push_back("counterfactual");
  return p;
}

ScoreMatrix score_response_records(std::span<const ResponseRecord> records,
                                   const Scorer& scorer) {
  if (records.empty()) return ScoreMatrix();
  std::vector<std::string> prompt_ids;
  std::map<std::string, int> counts;
  for (const auto& r : records) {
    auto [it, fresh] = counts.try_emplace(r.prompt_id, 0);
    if (fresh) prompt_ids.push_back(r.prompt_id);
    ++it->second;
  }
  int generations = 1;
  for (const auto& [id, n] : counts) generations = std::max(generations, n);

  std::map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < prompt_ids.size(); ++i) row_of[prompt_ids[i]] = i;

  struct Cell {
    std::size_t row;
    int col;
  };
  std::vector<std::string> texts;
  std::vector<Cell> cells;
  std::map<std::string, int> next_col;
  for (const auto& r : records) {
    const int col = next_col[r.prompt_id]++;
    if (!r.ok) continue;
    texts.push_back(r.response);
    cells.push_back({row_of.at(r.prompt_id), col});
  }

  ScoreMatrix matrix(std::move(prompt_ids), generations);
  if (texts.empty()) return matrix;
  const auto scores = scorer.score_texts(texts);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    matrix.set(cells[i].row, cells[i].col, scores[i]);
  }
  return matrix;
}

MetricFamily toxicity_family(std::span<const ResponseRecord> records,
                             const Scorer& scorer, double threshold, Exec exec) {
  MetricFamily family;
  try {
    const auto matrix = score_response_records(records, scorer);
    const ToxicityConfig cfg{threshold};
    family.results = {expected_max_toxicity(matrix, exec),
                      toxicity_probability(matrix, cfg, exec),
                      toxic_fraction(matrix, cfg, exec)};
  } catch (const Error& e) {
    family.results.clear();
    family.absent_reason = std::string("toxicity scoring failed: ") + e.what();
  }
  return family;
}

MetricFamily stereotype_family(std::span<const ResponseRecord> records,
                               const Scorer& scorer, double threshold,
                               const CooccurrenceConfig& cooccurrence,
                               std::span<const AttributeLexicon> lexicons,
                               Exec exec) {
  MetricFamily family;
  try {
    const auto matrix = score_response_records(records, scorer);
    family.results =
        stereotype_classifier_metrics(matrix, StereotypeConfig{threshold}, exec);
  } catch (const Error& e) {
    const std::string reason =
        std::string("stereotype scoring failed: ") + e.what();
    family.results = {MetricResult::absent("expected_max_stereotype", reason),
                      MetricResult::absent("stereotype_probability", reason),
                      MetricResult::absent("stereotype_fraction", reason)};
  }
  const auto texts = ok_texts(records);
  for (const auto& lexicon : lexicons) {
    const auto counts = cooccurrence_counts(texts, cooccurrence, lexicon, exec);
    if (lexicon.group_order().size() == 2) {
      family.results.push_back(with_attribute_suffix(
          cooccurrence_bias_score(counts, lexicon), lexicon.attribute()));
    }
    family.results.push_back(with_attribute_suffix(
        stereotype_association(counts, lexicon), lexicon.attribute()));
  }
  return family;
}

std::vector<CounterfactualComparison> counterfactual_comparisons(
    std::span<const ResponseRecord> records, const AttributeLexicon& lexicon,
    const Scorer& sentiment_scorer,
    const std::optional<std::string>& embedding_url, Exec exec) {
  std::vector<CounterfactualComparison> comparisons;
  const auto& groups = lexicon.group_order();
  for (std::size_t a = 0; a < groups.size(); ++a) {
    for (std::size_t b = a + 1; b < groups.size(); ++b) {
      CounterfactualComparison cmp;
      cmp.attribute = lexicon.attribute();
      cmp.group_a = groups[a];
      cmp.group_b = groups[b];
      const auto pairs =
          align_counterfactual_pairs(records, groups[a], groups[b]);
      try {
        cmp.results.push_back(
            counterfactual_sentiment_bias_weak(pairs, sentiment_scorer));
        cmp.results.push_back(
            counterfactual_sentiment_bias_strict(pairs, sentiment_scorer));
      } catch (const Error& e) {
        const std::string reason =
            std::string("sentiment scoring failed: ") + e.what();
        cmp.results.push_back(
            MetricResult::absent("sentiment_bias_weak", reason));
        cmp.results.push_back(
            MetricResult::absent("sentiment_bias_strict", reason));
      }
      cmp.results.push_back(counterfactual_cosine(pairs, exec));
      cmp.results.push_back(counterfactual_rouge_l(pairs, exec));
      cmp.results.push_back(counterfactual_bleu(pairs, exec));
      if (embedding_url) {
        try {
          cmp.results.push_back(
              counterfactual_cosine_embedded(pairs, *embedding_url));
        } catch (const Error& e) {
          cmp.results.push_back(MetricResult::absent(
              "cosine_similarity_embedded",
              std::string("embedding failed: ") + e.what()));
        }
      }
      comparisons.push_back(std::move(cmp));
    }
  }
  return comparisons;
}

AutoEvalReport evaluate(std::span<const PromptRecord> prompts,
                        const AutoEvalConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = iso_utc_now();

  validate_generation_config(config.generation);
  validate(ToxicityConfig{config.toxicity_threshold});
  validate(StereotypeConfig{config.stereotype_threshold});
  validate(config.cooccurrence);
  const Scorer toxicity_scorer(config.toxicity_scorer, config.exec);
  const Scorer stereotype_scorer(config.stereotype_scorer, config.exec);
  const Scorer sentiment_scorer(config.sentiment_scorer, config.exec);

  std::vector<AttributeLexicon> lexicons = config.lexicons;
  if (lexicons.empty()) {
    lexicons = {AttributeLexicon::builtin_gender(),
                AttributeLexicon::builtin_race()};
  }

  AutoEvalReport report;
  report.ftu.checked = true;
  std::vector<FtuReport> ftu_reports;
  ftu_reports.reserve(lexicons.size());
  for (const auto& lexicon : lexicons) {
    ftu_reports.push_back(check_ftu(prompts, lexicon));
  }
  for (const auto& ftu : ftu_reports) {
    report.ftu.satisfied = report.ftu.satisfied && ftu.satisfied;
    report.ftu.total_matches += ftu.total_matches;
  }
  report.ftu.attributes = ftu_reports;

  const AutoEvalPlan run_plan = plan(ftu_reports);

  const auto responses = generate_responses(prompts, config.generation);

  report.toxicity = toxicity_family(responses, toxicity_scorer,
                                    config.toxicity_threshold, config.exec);
  report.stereotype =
      stereotype_family(responses, stereotype_scorer,
                        config.stereotype_threshold, config.cooccurrence,
                        lexicons, config.exec);

  long long counterfactual_responses = 0;
  long long counterfactual_failures = 0;
  if (run_plan.ftu_satisfied) {
    report.counterfactual.absent_reason = "FTU satisfied";
  } else {
    for (std::size_t i = 0; i < lexicons.size(); ++i) {
      if (ftu_reports[i].satisfied) continue;
      const auto build = build_counterfactual_sets(prompts, lexicons[i]);
      const auto cf_responses =
          generate_counterfactual_responses(build.sets, config.generation);
      counterfactual_responses += static_cast<long long>(cf_responses.size());
      counterfactual_failures += count_failures(cf_responses);
      auto comparisons =
          counterfactual_comparisons(cf_responses, lexicons[i], sentiment_scorer,
                                     config.embedding_url, config.exec);
      for (auto& cmp : comparisons) {
        report.counterfactual.comparisons.push_back(std::move(cmp));
      }
    }
  }

  nlohmann::json metadata;
  metadata["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  metadata["generation"] = generation_metadata(config.generation);
  metadata["scorers"] = {{"toxicity", config.toxicity_scorer.label()},
                         {"stereotype", config.stereotype_scorer.label()},
                         {"sentiment", config.sentiment_scorer.label()}};
  if (config.embedding_url) {
    metadata["scorers"]["embedding"] = *config.embedding_url;
  }
  metadata["thresholds"] = {{"toxicity", config.toxicity_threshold},
                            {"stereotype", config.stereotype_threshold}};
  metadata["cooccurrence"] = {
      {"window", config.cooccurrence.window},
      {"target_count", config.cooccurrence.target_words.size()}};
  auto attributes = nlohmann::json::array();
  for (const auto& lexicon : lexicons) attributes.push_back(lexicon.attribute());
  metadata["attributes"] = std::move(attributes);
  metadata["plan"] = {{"ftu_satisfied", run_plan.ftu_satisfied},
                      {"metrics_selected", run_plan.metrics_selected},
                      {"counterfactual_groups", run_plan.counterfactual_groups}};
  metadata["exec"] = config.exec == Exec::parallel ? "parallel" : "serial";
  metadata["counts"] = {
      {"prompts", prompts.size()},
      {"responses", responses.size()},
      {"generation_failures", count_failures(responses)},
      {"counterfactual_responses", counterfactual_responses},
      {"counterfactual_failures", counterfactual_failures}};
  const auto finished = std::chrono::steady_clock::now();
  metadata["run"] = {
      {"started_at", started_at},
      {"finished_at", iso_utc_now()},
      {"duration_s",
       std::chrono::duration<double>(finished - started).count()}};
  report.metadata = std::move(metadata);
  return report;
}

}  // namespace fairaudit
