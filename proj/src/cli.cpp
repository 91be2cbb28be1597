#include "fairaudit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairaudit/autoeval.hpp"
#include "fairaudit/dataset_io.hpp"
#include "fairaudit/error.hpp"
#include "fairaudit/lexicon.hpp"
#include "fairaudit/llm_client.hpp"
#include "fairaudit/metrics/classification.hpp"
#include "fairaudit/metrics/recommendation.hpp"
#include "fairaudit/metrics/stereotype.hpp"
#include "fairaudit/report.hpp"
#include "fairaudit/scorers.hpp"
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

struct GenerationFlags {
  GenerationConfig cfg;

  void attach(CLI::App* cmd) {
    cmd->add_option("--endpoint", cfg.endpoint_url,
                    "Chat-completions base URL (http://host[:port][/prefix])")
        ->required();
    cmd->add_option("--model", cfg.model, "Model name sent with every request")
        ->required();
    cmd->add_option("--m", cfg.m, "Generations per prompt")
        ->capture_default_str();
    cmd->add_option("--temperature", cfg.temperature, "Sampling temperature")
        ->capture_default_str();
    cmd->add_option("--concurrency", cfg.concurrency,
                    "Maximum in-flight requests")
        ->capture_default_str();
    cmd->add_option("--max-retries", cfg.max_retries,
                    "Retries per request on 429/5xx/transport errors")
        ->capture_default_str();
    cmd->add_option("--timeout", cfg.timeout_s, "Per-request timeout, seconds")
        ->capture_default_str();
    cmd->add_option("--system-prompt", cfg.system_prompt,
                    "Optional system message");
    cmd->add_option("--api-key-env", cfg.api_key_env,
                    "Environment variable holding the bearer token; empty "
                    "disables auth")
        ->capture_default_str();
    cmd->add_option("--backoff-base", cfg.backoff_base_s,
                    "Base retry backoff, seconds")
        ->capture_default_str();
  }
};

struct LexiconFlags {
  std::vector<std::string> attributes;
  std::vector<std::string> files;

  void attach(CLI::App* cmd) {
    cmd->add_option("--attribute", attributes,
                    "Built-in attribute lexicon (gender, race); repeatable");
    cmd->add_option("--lexicon", files,
                    "Custom attribute lexicon JSON file; repeatable");
  }

  std::vector<AttributeLexicon> resolve(bool default_builtins) const {
    std::vector<AttributeLexicon> out;
    for (const auto& name : attributes) {
      out.push_back(AttributeLexicon::builtin(name));
    }
    for (const auto& path : files) {
      out.push_back(AttributeLexicon::from_file(path));
    }
    if (out.empty() && default_builtins) {
      out = {AttributeLexicon::builtin_gender(),
             AttributeLexicon::builtin_race()};
    }
    std::set<std::string> seen;
    for (const auto& lexicon : out) {
      if (!seen.insert(lexicon.attribute()).second) {
        throw ConfigError("attribute \"" + lexicon.attribute() +
                          "\" configured twice");
      }
    }
    return out;
  }
};

struct ScorerFlags {
  std::string toxicity;
  std::string stereotype;
  std::string sentiment = "builtin:sentiment";
  std::optional<std::string> embedding;

  void attach(CLI::App* cmd) {
    cmd->add_option("--toxicity-scorer", toxicity,
                    "Toxicity scorer: http(s)://..., file:PATH, or "
                    "builtin:sentiment")
        ->required();
    cmd->add_option("--stereotype-scorer", stereotype,
                    "Stereotype scorer, same syntax")
        ->required();
    cmd->add_option("--sentiment-scorer", sentiment,
                    "Sentiment scorer for counterfactual metrics")
        ->capture_default_str();
    cmd->add_option("--embedding-endpoint", embedding,
                    "Optional /embed endpoint for embedding-based cosine");
  }
};

struct MetricFlags {
  double toxicity_threshold = 0.5;
  double stereotype_threshold = 0.5;
  int window = 10;
  std::string targets_file;

  void attach(CLI::App* cmd) {
    cmd->add_option("--threshold", toxicity_threshold,
                    "Toxicity classification threshold")
        ->capture_default_str();
    cmd->add_option("--stereotype-threshold", stereotype_threshold,
                    "Stereotype classification threshold")
        ->capture_default_str();
    cmd->add_option("--window", window, "Co-occurrence window, tokens")
        ->capture_default_str();
    cmd->add_option("--targets", targets_file,
                    "Target-word list file (one term per line)");
  }

  CooccurrenceConfig cooccurrence() const {
    CooccurrenceConfig cfg = targets_file.empty()
                                 ? CooccurrenceConfig::with_builtin_targets()
                                 : CooccurrenceConfig{};
    if (!targets_file.empty()) {
      cfg.target_words = parse_target_words(read_text_file(targets_file));
    }
    cfg.window = window;
    return cfg;
  }
};

std::filesystem::path markdown_twin(const std::filesystem::path& out) {
  if (out.extension() == ".json") {
    auto md = out;
    md.replace_extension(".md");
    return md;
  }
  auto md = out;
  md += ".md";
  return md;
}

void write_report_files(const AutoEvalReport& report,
                        const std::filesystem::path& out) {
  atomic_write_text(out, render_json(report));
  atomic_write_text(markdown_twin(out), render_markdown(report));
}

bool result_list_voided(const std::vector<MetricResult>& results) {
  for (const auto& r : results) {
    if (r.value) return false;
  }
  return true;
}

bool family_voided(const MetricFamily& family) {
  return !family.present() || result_list_voided(family.results);
}

// True when no requested metric family produced a single value. A
// counterfactual section that was skipped (unawareness check passed, or
// not requested at all) has no values and cannot rescue an otherwise
// voided report.
bool report_voided(const AutoEvalReport& report) {
  if (!family_voided(report.toxicity)) return false;
  if (!family_voided(report.stereotype)) return false;
  for (const auto& cmp : report.counterfactual.comparisons) {
    if (!result_list_voided(cmp.results)) return false;
  }
  return true;
}

// JSON + markdown emission for the single-table subcommands
// (recommend-eval, classify-eval).
int write_metric_list_report(const std::string& title,
                             const std::vector<MetricResult>& results,
                             nlohmann::json metadata,
                             const std::filesystem::path& out) {
  metadata["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  metadata["run"] = {{"finished_at", iso_utc_now()}};
  nlohmann::json j;
  auto arr = nlohmann::json::array();
  for (const auto& r : results) arr.push_back(metric_result_to_json(r));
  j["metrics"] = std::move(arr);
  j["metadata"] = metadata;
  atomic_write_text(out, j.dump(2) + "\n");

  std::string md = "# " + title + "\n\n";
  md += "| metric | value | support |\n";
  md += "| --- | ---: | ---: |\n";
  for (const auto& r : results) {
    char buf[64];
    std::string value = "absent";
    if (r.value) {
      std::snprintf(buf, sizeof(buf), "%.4f", *r.value);
      value = buf;
    }
    md += "| " + r.name + " | " + value + " | " + std::to_string(r.support) +
          " |\n";
  }
  for (const auto& r : results) {
    if (!r.value) {
      md += "\n_" + r.name + " not computed: " + r.absent_reason + "_\n";
    }
  }
  md += "\n## Configuration\n\n```json\n" + metadata.dump(2) + "\n```\n";
  atomic_write_text(markdown_twin(out), md);

  return result_list_voided(results) ? 2 : 0;
}

int run_generate(const std::string& prompts_path, const GenerationFlags& gen,
                 const std::string& out) {
  const auto prompts = read_prompts(prompts_path);
  validate_generation_config(gen.cfg);
  const auto records = generate_responses(prompts, gen.cfg);
  write_responses(records, out);
  long long failures = 0;
  for (const auto& r : records) failures += r.ok ? 0 : 1;
  std::cerr << "wrote " << records.size() << " responses (" << failures
            << " failed) to " << out << "\n";
  return 0;
}

int run_counterfactual(const std::string& prompts_path,
                       const GenerationFlags& gen, const LexiconFlags& lex,
                       const std::string& out) {
  const auto lexicons = lex.resolve(false);
  if (lexicons.size() != 1) {
    throw ConfigError(
        "counterfactual generation needs exactly one --attribute or "
        "--lexicon");
  }
  const auto prompts = read_prompts(prompts_path);
  validate_generation_config(gen.cfg);
  const auto build = build_counterfactual_sets(prompts, lexicons[0]);
  if (build.sets.empty()) {
    throw ConfigError("no prompt contains \"" + lexicons[0].attribute() +
                      "\" attribute words; nothing to generate");
  }
  const auto records = generate_counterfactual_responses(build.sets, gen.cfg);
  write_responses(records, out);
  std::cerr << "wrote " << records.size() << " responses for "
            << build.sets.size() << " prompts x "
            << lexicons[0].group_order().size() << " groups to " << out << "\n";
  if (!build.skipped.empty()) {
    std::cerr << build.skipped.size()
              << " prompts had no attribute words and were skipped\n";
  }
  return 0;
}

int run_ftu_check(const std::string& prompts_path, const LexiconFlags& lex,
                  const std::string& out) {
  const auto lexicons = lex.resolve(true);
  const auto prompts = read_prompts(prompts_path);
  nlohmann::json report = nlohmann::json::array();
  bool all_satisfied = true;
  for (const auto& lexicon : lexicons) {
    const auto ftu = check_ftu(prompts, lexicon);
    all_satisfied = all_satisfied && ftu.satisfied;
    std::cout << "attribute " << ftu.attribute << ": "
              << (ftu.satisfied ? "satisfied" : "not satisfied") << " ("
              << ftu.total_matches << " matches)\n";
    if (!ftu.per_prompt.empty()) {
      std::cout << "| prompt | group | matches |\n";
      std::cout << "| --- | --- | ---: |\n";
      for (const auto& [prompt_id, by_group] : ftu.per_prompt) {
        for (const auto& [group, n] : by_group) {
          std::cout << "| " << prompt_id << " | " << group << " | " << n
                    << " |\n";
        }
      }
    }
    nlohmann::json entry;
    entry["attribute"] = ftu.attribute;
    entry["groups"] = ftu.groups;
    entry["per_prompt"] = ftu.per_prompt;
    entry["total_matches"] = ftu.total_matches;
    entry["satisfied"] = ftu.satisfied;
    report.push_back(std::move(entry));
  }
  std::cout << (all_satisfied ? "FTU satisfied" : "FTU not satisfied") << "\n";
  if (!out.empty()) {
    atomic_write_text(out, report.dump(2) + "\n");
  }
  return 0;
}

int run_autoeval(const std::string& prompts_path, const GenerationFlags& gen,
                 const ScorerFlags& scorers, const MetricFlags& metrics,
                 const LexiconFlags& lex, bool serial, const std::string& out) {
  const auto prompts = read_prompts(prompts_path);
  AutoEvalConfig cfg;
  cfg.generation = gen.cfg;
  cfg.toxicity_scorer = ScorerSpec::parse(scorers.toxicity);
  cfg.stereotype_scorer = ScorerSpec::parse(scorers.stereotype);
  cfg.sentiment_scorer = ScorerSpec::parse(scorers.sentiment);
  cfg.lexicons = lex.resolve(false);
  cfg.toxicity_threshold = metrics.toxicity_threshold;
  cfg.stereotype_threshold = metrics.stereotype_threshold;
  cfg.cooccurrence = metrics.cooccurrence();
  cfg.embedding_url = scorers.embedding;
  cfg.exec = serial ? Exec::serial : Exec::parallel;

  const auto report = evaluate(prompts, cfg);
  write_report_files(report, out);
  return report_voided(report) ? 2 : 0;
}

int run_evaluate(const std::string& responses_path,
                 const std::string& cf_responses_path,
                 const ScorerFlags& scorers, const MetricFlags& metrics,
                 const LexiconFlags& lex, bool serial, const std::string& out) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = iso_utc_now();
  const Exec exec = serial ? Exec::serial : Exec::parallel;

  const auto lexicons = lex.resolve(true);
  const auto cooccurrence = metrics.cooccurrence();
  validate(cooccurrence);
  const Scorer toxicity_scorer(ScorerSpec::parse(scorers.toxicity), exec);
  const Scorer stereotype_scorer(ScorerSpec::parse(scorers.stereotype), exec);
  const Scorer sentiment_scorer(ScorerSpec::parse(scorers.sentiment), exec);

  const auto records = read_responses(responses_path);

  AutoEvalReport report;
  report.ftu.checked = false;
  report.toxicity = toxicity_family(records, toxicity_scorer,
                                    metrics.toxicity_threshold, exec);
  report.stereotype =
      stereotype_family(records, stereotype_scorer,
                        metrics.stereotype_threshold, cooccurrence, lexicons,
                        exec);

  long long cf_count = 0;
  long long cf_failures = 0;
  if (cf_responses_path.empty()) {
    report.counterfactual.absent_reason = "not requested";
  } else {
    const auto cf_records = read_responses(cf_responses_path);
    cf_count = static_cast<long long>(cf_records.size());
    for (const auto& r : cf_records) cf_failures += r.ok ? 0 : 1;
    std::set<std::string> record_groups;
    for (const auto& r : cf_records) {
      if (r.group) record_groups.insert(*r.group);
    }
    for (const auto& lexicon : lexicons) {
      const bool relevant =
          std::any_of(lexicon.group_order().begin(), lexicon.group_order().end(),
                      [&](const std::string& g) {
                        return record_groups.count(g) > 0;
                      });
      if (!relevant) continue;
      auto comparisons = counterfactual_comparisons(
          cf_records, lexicon, sentiment_scorer, scorers.embedding, exec);
      for (auto& cmp : comparisons) {
        report.counterfactual.comparisons.push_back(std::move(cmp));
      }
    }
    if (report.counterfactual.comparisons.empty()) {
      report.counterfactual.absent_reason =
          "no responses labeled with the configured attribute groups";
    }
  }

  long long failures = 0;
  for (const auto& r : records) failures += r.ok ? 0 : 1;
  nlohmann::json metadata;
  metadata["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  metadata["subcommand"] = "evaluate";
  metadata["scorers"] = {{"toxicity", scorers.toxicity},
                         {"stereotype", scorers.stereotype},
                         {"sentiment", scorers.sentiment}};
  if (scorers.embedding) metadata["scorers"]["embedding"] = *scorers.embedding;
  metadata["thresholds"] = {{"toxicity", metrics.toxicity_threshold},
                            {"stereotype", metrics.stereotype_threshold}};
  metadata["cooccurrence"] = {{"window", cooccurrence.window},
                              {"target_count", cooccurrence.target_words.size()}};
  auto attributes = nlohmann::json::array();
  for (const auto& lexicon : lexicons) attributes.push_back(lexicon.attribute());
  metadata["attributes"] = std::move(attributes);
  metadata["exec"] = serial ? "serial" : "parallel";
  metadata["counts"] = {{"responses", records.size()},
                        {"generation_failures", failures},
                        {"counterfactual_responses", cf_count},
                        {"counterfactual_failures", cf_failures}};
  const auto finished = std::chrono::steady_clock::now();
  metadata["run"] = {
      {"started_at", started_at},
      {"finished_at", iso_utc_now()},
      {"duration_s",
       std::chrono::duration<double>(finished - started).count()}};
  report.metadata = std::move(metadata);

  write_report_files(report, out);
  return report_voided(report) ? 2 : 0;
}

int run_recommend_eval(const std::string& input, const std::string& mode,
                       const std::string& out) {
  const auto cases = read_recommendation_cases(input);
  const auto rec_mode = mode == "attribute" ? RecommendationMode::attribute
                                            : RecommendationMode::pairwise;
  const auto results = evaluate_recommendations(cases, rec_mode);
  nlohmann::json metadata;
  metadata["subcommand"] = "recommend-eval";
  metadata["mode"] = mode;
  metadata["counts"] = {{"cases", cases.size()}};
  return write_metric_list_report("Recommendation fairness report", results,
                                  std::move(metadata), out);
}

int run_classify_eval(const std::string& input, const std::string& out) {
  const auto records = read_classification_records(input);
  const auto confusions = confusion_by_group(records);
  const auto results = classification_disparities(confusions);
  nlohmann::json metadata;
  metadata["subcommand"] = "classify-eval";
  auto groups = nlohmann::json::object();
  for (const auto& g : confusions) {
    groups[g.group] = {{"tp", g.tp}, {"fp", g.fp}, {"tn", g.tn}, {"fn", g.fn}};
  }
  metadata["confusion"] = std::move(groups);
  metadata["counts"] = {{"records", records.size()},
                        {"groups", confusions.size()}};
  return write_metric_list_report("Classification fairness report", results,
                                  std::move(metadata), out);
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"LLM bias and fairness auditing"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::function<int()> action;

  // generate
  {
    auto* cmd = app.add_subcommand(
        "generate", "Generate m responses per prompt from a JSONL prompt set");
    auto prompts = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto gen = std::make_shared<GenerationFlags>();
    cmd->add_option("--prompts", *prompts, "Prompt JSONL ({\"id\",\"text\"})")
        ->required();
    cmd->add_option("--out", *out, "Output responses JSONL")->required();
    gen->attach(cmd);
    cmd->callback(
        [=, &action] { action = [=] { return run_generate(*prompts, *gen, *out); }; });
  }

  // counterfactual
  {
    auto* cmd = app.add_subcommand(
        "counterfactual",
        "Generate responses for per-group counterfactual prompt variants");
    auto prompts = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto gen = std::make_shared<GenerationFlags>();
    auto lex = std::make_shared<LexiconFlags>();
    cmd->add_option("--prompts", *prompts, "Prompt JSONL")->required();
    cmd->add_option("--out", *out, "Output responses JSONL")->required();
    gen->attach(cmd);
    lex->attach(cmd);
    cmd->callback([=, &action] {
      action = [=] { return run_counterfactual(*prompts, *gen, *lex, *out); };
    });
  }

  // ftu-check
  {
    auto* cmd = app.add_subcommand(
        "ftu-check", "Scan prompts for protected-attribute words");
    auto prompts = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto lex = std::make_shared<LexiconFlags>();
    cmd->add_option("--prompts", *prompts, "Prompt JSONL")->required();
    cmd->add_option("--out", *out, "Optional JSON output path");
    lex->attach(cmd);
    cmd->callback([=, &action] {
      action = [=] { return run_ftu_check(*prompts, *lex, *out); };
    });
  }

  // autoeval
  {
    auto* cmd = app.add_subcommand(
        "autoeval",
        "Check FTU, generate responses, and compute every applicable metric");
    auto prompts = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto gen = std::make_shared<GenerationFlags>();
    auto scorers = std::make_shared<ScorerFlags>();
    auto metrics = std::make_shared<MetricFlags>();
    auto lex = std::make_shared<LexiconFlags>();
    auto serial = std::make_shared<bool>(false);
    cmd->add_option("--prompts", *prompts, "Prompt JSONL")->required();
    cmd->add_option("--out", *out, "Report JSON path (markdown twin derived)")
        ->required();
    gen->attach(cmd);
    scorers->attach(cmd);
    metrics->attach(cmd);
    lex->attach(cmd);
    cmd->add_flag("--serial", *serial, "Disable parallel metric kernels");
    cmd->callback([=, &action] {
      action = [=] {
        return run_autoeval(*prompts, *gen, *scorers, *metrics, *lex, *serial,
                            *out);
      };
    });
  }

  // evaluate
  {
    auto* cmd = app.add_subcommand(
        "evaluate",
        "Compute metrics from already-generated responses (offline)");
    auto responses = std::make_shared<std::string>();
    auto cf_responses = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto scorers = std::make_shared<ScorerFlags>();
    auto metrics = std::make_shared<MetricFlags>();
    auto lex = std::make_shared<LexiconFlags>();
    auto serial = std::make_shared<bool>(false);
    cmd->add_option("--responses", *responses, "Responses JSONL")->required();
    cmd->add_option("--counterfactual-responses", *cf_responses,
                    "Counterfactual responses JSONL (enables the "
                    "counterfactual section)");
    cmd->add_option("--out", *out, "Report JSON path")->required();
    scorers->attach(cmd);
    metrics->attach(cmd);
    lex->attach(cmd);
    cmd->add_flag("--serial", *serial, "Disable parallel metric kernels");
    cmd->callback([=, &action] {
      action = [=] {
        return run_evaluate(*responses, *cf_responses, *scorers, *metrics, *lex,
                            *serial, *out);
      };
    });
  }

  // recommend-eval
  {
    auto* cmd = app.add_subcommand(
        "recommend-eval", "Ranked-list fairness metrics over recommendations");
    auto input = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("pairwise");
    cmd->add_option("--input", *input,
                    "Recommendation JSONL ({\"case_id\",\"group\",\"items\"})")
        ->required();
    cmd->add_option("--mode", *mode, "pairwise or attribute")
        ->check(CLI::IsMember({"pairwise", "attribute"}))
        ->capture_default_str();
    cmd->add_option("--out", *out, "Report JSON path")->required();
    cmd->callback([=, &action] {
      action = [=] { return run_recommend_eval(*input, *mode, *out); };
    });
  }

  // classify-eval
  {
    auto* cmd = app.add_subcommand(
        "classify-eval", "Group disparity metrics over labeled predictions");
    auto input = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--input", *input,
                    "Classification JSONL ({\"y_true\",\"y_pred\",\"group\"})")
        ->required();
    cmd->add_option("--out", *out, "Report JSON path")->required();
    cmd->callback(
        [=, &action] { action = [=] { return run_classify_eval(*input, *out); }; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    return action ? action() : 1;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace fairaudit
