// End-to-end acceptance checks. Each criterion prints exactly one
// PASS/FAIL line; the exit status is the number of failures. Tolerances
// are pinned here: kExact for integer-free arithmetic that must match a
// brute-force oracle bit for bit, kTight (1e-12) for algebraic
// identities, kCdf (1e-9) for cross-algorithm agreement, kGolden (1e-4)
// for hand-computed fixtures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fairaudit/autoeval.hpp"
#include "fairaudit/lexicon.hpp"
#include "fairaudit/llm_client.hpp"
#include "fairaudit/metrics/classification.hpp"
#include "fairaudit/metrics/counterfactual.hpp"
#include "fairaudit/metrics/recommendation.hpp"
#include "fairaudit/metrics/stereotype.hpp"
#include "fairaudit/metrics/toxicity.hpp"
#include "fairaudit/report.hpp"
#include "fairaudit/score_matrix.hpp"
#include "fairaudit/scorers.hpp"
#include "support/oracles.hpp"
#include "support/test_servers.hpp"

using namespace fairaudit;

namespace {

constexpr double kTight = 1e-12;
constexpr double kCdf = 1e-9;
constexpr double kGolden = 1e-4;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

GenerationConfig mock_generation(const std::string& url, int m) {
  GenerationConfig cfg;
  cfg.endpoint_url = url;
  cfg.model = "acceptance-model";
  cfg.api_key_env = "";
  cfg.m = m;
  cfg.concurrency = 4;
  cfg.max_retries = 2;
  cfg.timeout_s = 10.0;
  cfg.backoff_base_s = 0.001;
  return cfg;
}

std::vector<std::string> request_user_texts(const testsupport::MockLlmServer& s) {
  std::vector<std::string> out;
  for (const auto& req : s.requests()) {
    for (const auto& msg : req.body.at("messages")) {
      if (msg.value("role", "") == "user") out.push_back(msg.value("content", ""));
    }
  }
  return out;
}

const char* kMaleFirstLexicon = R"({
  "attribute": "gender",
  "groups": {"male": ["he", "man"], "female": ["she", "woman"]},
  "counterparts": {
    "he": {"male": "he", "female": "she"},
    "she": {"male": "he", "female": "she"},
    "man": {"male": "man", "female": "woman"},
    "woman": {"male": "man", "female": "woman"}
  }
})";

const char* kFemaleFirstLexicon = R"({
  "attribute": "gender",
  "groups": {"female": ["she", "woman"], "male": ["he", "man"]},
  "counterparts": {
    "he": {"male": "he", "female": "she"},
    "she": {"male": "he", "female": "she"},
    "man": {"male": "man", "female": "woman"},
    "woman": {"male": "man", "female": "woman"}
  }
})";

// --- criterion 1: classifier score summaries vs brute force, exact ----------

bool criterion1(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int trials = 400;

  for (int trial = 0; trial < trials; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int m = 1 + static_cast<int>(rng() % 6);
    std::vector<std::vector<std::optional<double>>> rows(
        n, std::vector<std::optional<double>>(m));
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i));
    ScoreMatrix matrix(ids, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        if (unit(rng) < 0.2) continue;  // leave the cell empty
        const double v = unit(rng);
        rows[i][j] = v;
        matrix.set(static_cast<std::size_t>(i), j, v);
      }
    }
    const double tau = 0.05 + 0.9 * unit(rng);
    const auto expected = oracle::score_summary(rows, tau);

    for (const Exec exec : {Exec::serial, Exec::parallel}) {
      const auto em = expected_max_toxicity(matrix, exec);
      const auto prob = toxicity_probability(matrix, ToxicityConfig{tau}, exec);
      const auto frac = toxic_fraction(matrix, ToxicityConfig{tau}, exec);
      if (em.value != expected.expected_max || prob.value != expected.probability ||
          frac.value != expected.fraction) {
        detail = "mismatch at trial " + std::to_string(trial);
        return false;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 1.0) {
    detail = "took " + fmt("%.2f", elapsed) + "s, budget 1s";
    return false;
  }
  detail = std::to_string(trials) + " random matrices, exact match, " +
           fmt("%.0f", elapsed * 1000) + "ms";
  return true;
}

// --- criterion 2: identity and disjointness endpoints ------------------------

bool criterion2(std::string& detail) {
  const std::vector<std::string> texts = {
      "the cat sat on the mat",
      "a much longer sentence with several distinct words in it",
      "one"};

  CounterfactualPairSet identical;
  identical.group_a = "male";
  identical.group_b = "female";
  for (const auto& t : texts) identical.pairs.emplace_back(t, t);

  for (const auto& make :
       {counterfactual_cosine, counterfactual_rouge_l, counterfactual_bleu}) {
    const auto r = make(identical, Exec::serial);
    if (!r.value || !close(*r.value, 1.0, kTight)) {
      detail = r.name + " on identical pairs != 1.0";
      return false;
    }
  }

  const Scorer sentiment(ScorerSpec::builtin_sentiment(), Exec::serial);
  const auto weak = counterfactual_sentiment_bias_weak(identical, sentiment);
  const auto strict = counterfactual_sentiment_bias_strict(identical, sentiment);
  if (!weak.value || !close(*weak.value, 0.0, kTight) || !strict.value ||
      !close(*strict.value, 0.0, kTight)) {
    detail = "sentiment bias on identical pairs != 0.0";
    return false;
  }

  const std::vector<std::string> a = {"a", "b", "c"};
  const std::vector<std::string> b = {"d", "e", "f"};
  if (!close(jaccard_at_k(a, b), 0.0, kTight) ||
      !close(serp_at_k(a, b), 0.0, kTight) ||
      !close(prag_at_k(a, b), 0.0, kTight)) {
    detail = "disjoint ranked lists did not score 0";
    return false;
  }

  detail = "similarities 1.0, biases 0.0, disjoint overlaps 0.0";
  return true;
}

// --- criterion 3: ranked-list metrics vs exhaustive enumeration --------------

void k_permutations(const std::vector<std::string>& universe, int k,
                    std::vector<std::string>& current, std::vector<bool>& used,
                    std::vector<std::vector<std::string>>& out) {
  if (static_cast<int>(current.size()) == k) {
    out.push_back(current);
    return;
  }
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    current.push_back(universe[i]);
    k_permutations(universe, k, current, used, out);
    current.pop_back();
    used[i] = false;
  }
}

bool criterion3(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> universe = {"i0", "i1", "i2", "i3", "i4", "i5"};
  long long cases = 0;

  for (int k = 1; k <= 4; ++k) {
    std::vector<std::vector<std::string>> lists;
    std::vector<std::string> current;
    std::vector<bool> used(universe.size(), false);
    k_permutations(universe, k, current, used, lists);

    for (const auto& a : lists) {
      for (const auto& b : lists) {
        ++cases;
        if (!close(jaccard_at_k(a, b), oracle::jaccard(a, b), kTight)) {
          detail = "jaccard mismatch at K=" + std::to_string(k);
          return false;
        }
        if (!close(serp_at_k(a, b), oracle::serp(a, b), kTight)) {
          detail = "serp mismatch at K=" + std::to_string(k);
          return false;
        }
        if (k >= 2 && !close(prag_at_k(a, b), oracle::prag(a, b), kTight)) {
          detail = "prag mismatch at K=" + std::to_string(k);
          return false;
        }
      }
    }
  }

  const double elapsed = seconds_since(t0);
  if (cases < 10000) {
    detail = "only " + std::to_string(cases) + " cases";
    return false;
  }
  if (elapsed >= 30.0) {
    detail = "took " + fmt("%.1f", elapsed) + "s, budget 30s";
    return false;
  }
  detail = std::to_string(cases) + " list pairs, " + fmt("%.1f", elapsed) + "s";
  return true;
}

// --- criterion 4: weak vs strict ordering and the CDF oracle -----------------

bool criterion4(std::string& detail) {
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int trials = 1000;

  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = unit(rng);
    for (auto& v : b) v = unit(rng);

    const double weak = wasserstein1(a, b);
    double strict = 0.0;
    for (std::size_t i = 0; i < n; ++i) strict += std::abs(a[i] - b[i]);
    strict /= static_cast<double>(n);

    if (weak > strict + kTight) {
      detail = "weak " + fmt("%.6f", weak) + " > strict " + fmt("%.6f", strict);
      return false;
    }
    const double reference = oracle::wasserstein1_cdf(a, b);
    if (!close(weak, reference, kCdf)) {
      detail = "weak disagrees with the CDF oracle by " +
               fmt("%.2e", std::abs(weak - reference));
      return false;
    }
  }
  detail = std::to_string(trials) + " random samples, weak <= strict, CDF agreement";
  return true;
}

// --- criterion 5: co-occurrence bias antisymmetry ----------------------------

bool criterion5(std::string& detail) {
  const auto lex_ab = AttributeLexicon::from_json_text(kMaleFirstLexicon);
  const auto lex_ba = AttributeLexicon::from_json_text(kFemaleFirstLexicon);

  // Hand-checked fixture: "doctor" co-occurs once with each group,
  // "pilot" only with "he", so the score is ln((1/2)/(1/1)).
  {
    CooccurrenceConfig cfg;
    cfg.window = 10;
    cfg.target_words = {"doctor", "pilot"};
    const std::vector<std::string> corpus = {"he is a doctor", "he is a pilot",
                                             "she is a doctor"};
    const auto counts = cooccurrence_counts(corpus, cfg, lex_ab, Exec::serial);
    const auto result = cooccurrence_bias_score(counts, lex_ab);
    if (!result.value || !close(*result.value, -0.6931, kGolden)) {
      detail = "fixture score off: " +
               (result.value ? fmt("%.5f", *result.value) : result.absent_reason);
      return false;
    }
  }

  std::mt19937 rng(505);
  const std::vector<std::string> fillers = {"the", "old",  "fox", "ran",
                                            "by",  "mill", "on",  "road"};
  const std::vector<std::string> attribute_words = {"he", "she", "man", "woman"};
  const std::vector<std::string> target_pool = {"doctor", "nurse", "pilot"};

  int informative = 0;
  for (int trial = 0; trial < 80; ++trial) {
    CooccurrenceConfig cfg;
    cfg.window = 2 + static_cast<int>(rng() % 5);
    cfg.target_words = {target_pool.begin(), target_pool.end()};

    std::vector<std::string> corpus;
    const int texts = 3 + static_cast<int>(rng() % 4);
    for (int t = 0; t < texts; ++t) {
      std::string text;
      const int len = 4 + static_cast<int>(rng() % 9);
      for (int w = 0; w < len; ++w) {
        const int pick = static_cast<int>(rng() % 4);
        const std::string& word =
            pick == 0 ? attribute_words[rng() % attribute_words.size()]
            : pick == 1 ? target_pool[rng() % target_pool.size()]
                        : fillers[rng() % fillers.size()];
        if (!text.empty()) text += ' ';
        text += word;
      }
      corpus.push_back(text);
    }

    const auto counts = cooccurrence_counts(corpus, cfg, lex_ab, Exec::serial);
    const auto forward = cooccurrence_bias_score(counts, lex_ab);
    const auto backward = cooccurrence_bias_score(counts, lex_ba);
    if (forward.value.has_value() != backward.value.has_value()) {
      detail = "one direction absent, the other present";
      return false;
    }
    if (!forward.value) continue;
    ++informative;
    if (!close(*forward.value + *backward.value, 0.0, kTight)) {
      detail = "sum of directions " +
               fmt("%.2e", std::abs(*forward.value + *backward.value));
      return false;
    }
  }
  if (informative < 30) {
    detail = "only " + std::to_string(informative) + " informative corpora";
    return false;
  }
  detail = "fixture -0.6931, antisymmetric on " + std::to_string(informative) +
           " random corpora";
  return true;
}

// --- criterion 6: sentiment goldens and invariants ---------------------------

bool criterion6(std::string& detail) {
  const auto lexicon = SentimentLexicon::from_text("good 1.9");
  const double plain = sentiment_score("good", lexicon);
  const double negated = sentiment_score("not good", lexicon);
  if (!close(plain, 0.72022, kGolden)) {
    detail = "\"good\" scored " + fmt("%.5f", plain);
    return false;
  }
  if (!close(negated, 0.32938, kGolden)) {
    detail = "\"not good\" scored " + fmt("%.5f", negated);
    return false;
  }

  std::mt19937 rng(606);
  const std::vector<std::string> sentiment_words = {"good", "bad",  "great",
                                                    "not",  "very", "terrible"};
  const std::vector<std::string> neutral_words = {"zzq",  "blarp", "krum",
                                                  "flib", "wonk",  "dray"};

  for (int trial = 0; trial < 1000; ++trial) {
    // neutrality: no lexicon words -> exactly 0.5
    std::string neutral;
    const int len = 1 + static_cast<int>(rng() % 8);
    for (int w = 0; w < len; ++w) {
      if (!neutral.empty()) neutral += ' ';
      neutral += neutral_words[rng() % neutral_words.size()];
    }
    if (sentiment_score(neutral) != 0.5) {
      detail = "neutral text scored " + fmt("%.6f", sentiment_score(neutral));
      return false;
    }

    // case invariance on mixed vocabulary
    std::string lower;
    for (int w = 0; w < len + 2; ++w) {
      if (!lower.empty()) lower += ' ';
      lower += (rng() % 2) ? sentiment_words[rng() % sentiment_words.size()]
                           : neutral_words[rng() % neutral_words.size()];
    }
    std::string mixed = lower;
    for (auto& c : mixed) {
      if (rng() % 2) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (!close(sentiment_score(lower), sentiment_score(mixed), kTight)) {
      detail = "case variant diverged on \"" + lower + "\"";
      return false;
    }
  }
  detail = "goldens 0.72022/0.32938, 1000 neutrality and case checks";
  return true;
}

// --- criterion 7: unawareness gating of counterfactual generation ------------

bool criterion7(std::string& detail) {
  AutoEvalConfig cfg;
  cfg.toxicity_scorer = ScorerSpec::builtin_sentiment();
  cfg.stereotype_scorer = ScorerSpec::builtin_sentiment();
  cfg.sentiment_scorer = ScorerSpec::builtin_sentiment();
  cfg.lexicons = {AttributeLexicon::builtin_gender()};
  cfg.exec = Exec::serial;

  {
    testsupport::MockLlmServer server;
    server.start();
    cfg.generation = mock_generation(server.url(), 2);
    const std::vector<PromptRecord> prompts = {{"p1", "the weather is mild"},
                                               {"p2", "describe a garden"}};
    const auto report = evaluate(prompts, cfg);

    if (report.counterfactual.absent_reason != "FTU satisfied" ||
        !report.counterfactual.comparisons.empty()) {
      detail = "clean prompts still produced a counterfactual section";
      return false;
    }
    const auto seen = request_user_texts(server);
    if (seen.size() != prompts.size()) {
      detail = "expected one batched request per prompt, saw " +
               std::to_string(seen.size());
      return false;
    }
    for (const auto& text : seen) {
      if (text != prompts[0].text && text != prompts[1].text) {
        detail = "request for a non-original prompt: \"" + text + "\"";
        return false;
      }
    }
  }

  {
    testsupport::MockLlmServer server;
    server.start();
    const int m = 2;
    cfg.generation = mock_generation(server.url(), m);
    const std::vector<PromptRecord> prompts = {{"p1", "the weather is mild"},
                                               {"p2", "write about his day"}};
    const auto report = evaluate(prompts, cfg);

    if (report.counterfactual.comparisons.size() != 1) {
      detail = "expected one group comparison";
      return false;
    }
    const long long groups = 2;
    const auto cf_count =
        report.metadata.at("counts").at("counterfactual_responses")
            .get<long long>();
    if (cf_count != groups * m) {
      detail = "counterfactual generations " + std::to_string(cf_count) +
               ", expected " + std::to_string(groups * m);
      return false;
    }
  }

  detail = "no counterfactual traffic when clean, groups x m when not";
  return true;
}

// --- criterion 8: retries, permanent failures, concurrency -------------------

bool criterion8(std::string& detail) {
  // 30% of prompts fail twice before succeeding; the retry budget covers it.
  {
    testsupport::MockLlmServer server;
    server.fail_first_attempts = 2;
    server.transient_substring = "flaky";
    server.start();
    auto cfg = mock_generation(server.url(), 1);
    cfg.max_retries = 3;
    std::vector<PromptRecord> prompts;
    for (int i = 0; i < 10; ++i) {
      prompts.push_back({"p" + std::to_string(i),
                         (i < 3 ? std::string("flaky story ") : std::string("story ")) +
                             std::to_string(i)});
    }
    const auto records = generate_responses(prompts, cfg);
    for (const auto& r : records) {
      if (!r.ok) {
        detail = "transient failure not recovered for " + r.prompt_id;
        return false;
      }
      const bool flaky = r.variant_text.find("flaky") != std::string::npos;
      if (flaky && r.attempt_count != 3) {
        detail = r.prompt_id + " took " + std::to_string(r.attempt_count) +
                 " attempts, expected 3";
        return false;
      }
    }
  }

  // A permanently failing prompt yields ok=false records for exactly that
  // prompt, and score denominators drop the failed row.
  {
    testsupport::MockLlmServer server;
    server.poison_substring = "poison";
    server.start();
    auto cfg = mock_generation(server.url(), 1);
    cfg.max_retries = 1;
    const std::vector<PromptRecord> prompts = {{"p0", "fine morning"},
                                               {"p1", "poison pill"},
                                               {"p2", "quiet evening"},
                                               {"p3", "long walk"}};
    const auto records = generate_responses(prompts, cfg);
    for (const auto& r : records) {
      const bool poisoned = r.prompt_id == "p1";
      if (r.ok == poisoned) {
        detail = "wrong ok flag for " + r.prompt_id;
        return false;
      }
    }
    const Scorer scorer(ScorerSpec::builtin_sentiment(), Exec::serial);
    const auto matrix = score_response_records(records, scorer);
    const auto em = expected_max_toxicity(matrix, Exec::serial);
    if (!em.value || em.support != 3 ||
        em.details.value("excluded_rows", -1) != 1) {
      detail = "failed prompt not excluded from the denominator";
      return false;
    }
  }

  // In-flight requests never exceed the configured concurrency.
  int peak = 0;
  {
    testsupport::MockLlmServer server;
    server.handler_sleep_ms = 25;
    server.start();
    auto cfg = mock_generation(server.url(), 1);
    cfg.concurrency = 3;
    std::vector<PromptRecord> prompts;
    for (int i = 0; i < 12; ++i) {
      prompts.push_back({"c" + std::to_string(i), "note " + std::to_string(i)});
    }
    const auto records = generate_responses(prompts, cfg);
    if (records.size() != prompts.size()) {
      detail = "lost records under concurrency";
      return false;
    }
    peak = server.peak_concurrency();
    if (peak < 1 || peak > 3) {
      detail = "peak in-flight " + std::to_string(peak) + ", bound 3";
      return false;
    }
  }

  detail = "retries recovered, failure isolated, peak in-flight " +
           std::to_string(peak) + " <= 3";
  return true;
}

// --- criterion 9: classification disparities ---------------------------------

bool criterion9(std::string& detail) {
  const std::vector<ClassificationRecord> fixture = {
      {1, 1, "a"}, {0, 1, "a"}, {1, 0, "b"}, {0, 0, "b"}};
  const auto confusion = confusion_by_group(fixture);
  const auto prevalence_diff =
      disparity(RateKind::prevalence, confusion, DisparityMode::difference);
  const auto prevalence_ratio =
      disparity(RateKind::prevalence, confusion, DisparityMode::ratio);
  const auto fnr_diff = disparity(RateKind::fnr, confusion, DisparityMode::difference);
  if (!prevalence_diff.value || *prevalence_diff.value != 1.0 ||
      !prevalence_ratio.value || *prevalence_ratio.value != 0.0 ||
      !fnr_diff.value || *fnr_diff.value != 1.0) {
    detail = "worked example values off";
    return false;
  }

  std::mt19937 rng(909);
  const char* group_names[] = {"a", "b", "c"};
  const std::pair<RateKind, const char*> kinds[] = {
      {RateKind::prevalence, "prevalence"},
      {RateKind::fnr, "fnr"},
      {RateKind::fpr, "fpr"}};

  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 50);
    std::vector<ClassificationRecord> records;
    std::vector<oracle::LabeledRecord> labeled;
    for (int i = 0; i < n; ++i) {
      const int yt = static_cast<int>(rng() % 2);
      const int yp = static_cast<int>(rng() % 2);
      const std::string g = group_names[rng() % 3];
      records.push_back({yt, yp, g});
      labeled.push_back({yt, yp, g});
    }
    const auto groups = confusion_by_group(records);

    for (const auto& [kind, kind_name] : kinds) {
      const auto rates = oracle::group_rates(labeled, kind_name);
      const auto expected = oracle::worst_disparity(rates);
      const auto diff = disparity(kind, groups, DisparityMode::difference);
      const auto ratio = disparity(kind, groups, DisparityMode::ratio);

      if (diff.value.has_value() != expected.difference.has_value() ||
          ratio.value.has_value() != expected.ratio.has_value()) {
        detail = std::string(kind_name) + " presence mismatch at trial " +
                 std::to_string(trial);
        return false;
      }
      if (diff.value && !close(*diff.value, *expected.difference, kTight)) {
        detail = std::string(kind_name) + " difference mismatch";
        return false;
      }
      if (ratio.value && !close(*ratio.value, *expected.ratio, kTight)) {
        detail = std::string(kind_name) + " ratio mismatch";
        return false;
      }
    }
  }
  detail = "worked example exact, 1000 random datasets match the oracle";
  return true;
}

// --- criterion 10: determinism of repeated runs -------------------------------

bool criterion10(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  testsupport::MockLlmServer server;
  server.start();

  AutoEvalConfig cfg;
  cfg.generation = mock_generation(server.url(), 2);
  cfg.toxicity_scorer = ScorerSpec::builtin_sentiment();
  cfg.stereotype_scorer = ScorerSpec::builtin_sentiment();
  cfg.sentiment_scorer = ScorerSpec::builtin_sentiment();
  cfg.lexicons = {AttributeLexicon::builtin_gender()};
  cfg.exec = Exec::parallel;

  const std::vector<PromptRecord> prompts = {{"p1", "write about his day"},
                                             {"p2", "plain morning note"}};

  auto canonical = [](const AutoEvalReport& report) {
    auto j = report_to_json(report);
    j.at("metadata").erase("run");  // timestamps and duration are volatile
    return j.dump(2);
  };

  const auto first = canonical(evaluate(prompts, cfg));
  server.reset();  // resets per-text reply counters on the same port
  const auto second = canonical(evaluate(prompts, cfg));

  if (first != second) {
    detail = "serialized reports differ";
    return false;
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 10.0) {
    detail = "took " + fmt("%.1f", elapsed) + "s, budget 10s";
    return false;
  }
  detail = "byte-identical outside metadata.run, " + fmt("%.1f", elapsed) + "s";
  return true;
}

void run_criterion(int number, const char* label,
                   const std::function<bool(std::string&)>& fn, int& failures) {
  std::string detail;
  bool pass = false;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("%s criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", number, label,
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

}  // namespace

int main() {
  int failures = 0;
  run_criterion(1, "score summaries match brute force exactly", criterion1,
                failures);
  run_criterion(2, "identity and disjointness endpoints", criterion2, failures);
  run_criterion(3, "ranked-list metrics match exhaustive enumeration",
                criterion3, failures);
  run_criterion(4, "weak bias is bounded by strict and matches the CDF oracle",
                criterion4, failures);
  run_criterion(5, "co-occurrence bias is antisymmetric under group swap",
                criterion5, failures);
  run_criterion(6, "sentiment goldens and invariants", criterion6, failures);
  run_criterion(7, "counterfactual generation is gated by the unawareness check",
                criterion7, failures);
  run_criterion(8, "retries, failure isolation, and the concurrency bound",
                criterion8, failures);
  run_criterion(9, "classification disparities match the worked example and oracle",
                criterion9, failures);
  run_criterion(10, "repeated runs are byte-identical outside timestamps",
                criterion10, failures);

  if (failures > 0) std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
