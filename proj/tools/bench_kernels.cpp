// Times the parallel metric kernels against their serial reference on a
// synthetic corpus and verifies both produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "fairaudit/exec.hpp"
#include "fairaudit/lexicon.hpp"
#include "fairaudit/metrics/counterfactual.hpp"
#include "fairaudit/metrics/score_kernel.hpp"
#include "fairaudit/metrics/stereotype.hpp"
#include "fairaudit/metrics/toxicity.hpp"
#include "fairaudit/scorers.hpp"

namespace {

using fairaudit::Exec;

std::vector<std::string> synthetic_corpus(std::size_t texts, std::size_t tokens,
                                          unsigned seed) {
  static const std::vector<std::string> vocabulary = {
      "he",      "she",      "doctor",  "nurse",    "pilot",   "teacher",
      "good",    "bad",      "great",   "terrible", "not",     "very",
      "the",     "a",        "said",    "story",    "about",   "who",
      "works",   "hospital", "plane",   "school",   "smart",   "kind",
      "angry",   "happy",    "strong",  "weak",     "engineer", "artist"};
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary.size() - 1);
  std::vector<std::string> corpus;
  corpus.reserve(texts);
  for (std::size_t i = 0; i < texts; ++i) {
    std::string text;
    for (std::size_t t = 0; t < tokens; ++t) {
      if (t > 0) text += ' ';
      text += vocabulary[pick(rng)];
    }
    corpus.push_back(std::move(text));
  }
  return corpus;
}

template <typename Fn>
double time_ms(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

void report(const char* kernel, double serial_ms, double parallel_ms,
            bool identical) {
  std::printf("%-24s %10.1f ms %10.1f ms %8.2fx   %s\n", kernel, serial_ms,
              parallel_ms, serial_ms / parallel_ms,
              identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t texts =
      argc > 1 ? static_cast<std::size_t>(std::atoll(argv[1])) : 4000;
  const std::size_t tokens_per_text = 60;

  const auto corpus = synthetic_corpus(texts, tokens_per_text, 7);
  std::printf("corpus: %zu texts x %zu tokens\n\n", texts, tokens_per_text);
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  bool all_identical = true;

  {
    const auto& lexicon = fairaudit::SentimentLexicon::builtin();
    std::vector<double> serial, parallel;
    const double s = time_ms(
        [&] { serial = sentiment_scores(corpus, lexicon, Exec::serial); });
    const double p = time_ms(
        [&] { parallel = sentiment_scores(corpus, lexicon, Exec::parallel); });
    const bool same = serial == parallel;
    all_identical = all_identical && same;
    report("sentiment_scores", s, p, same);
  }

  {
    const auto cfg = fairaudit::CooccurrenceConfig::with_builtin_targets();
    const auto& lexicon = fairaudit::AttributeLexicon::builtin_gender();
    fairaudit::CooccurrenceCounts serial, parallel;
    const double s = time_ms([&] {
      serial = cooccurrence_counts(corpus, cfg, lexicon, Exec::serial);
    });
    const double p = time_ms([&] {
      parallel = cooccurrence_counts(corpus, cfg, lexicon, Exec::parallel);
    });
    const bool same = serial == parallel;
    all_identical = all_identical && same;
    report("cooccurrence_counts", s, p, same);
  }

  {
    fairaudit::CounterfactualPairSet pairs;
    pairs.group_a = "a";
    pairs.group_b = "b";
    for (std::size_t i = 0; i + 1 < corpus.size(); i += 2) {
      pairs.pairs.emplace_back(corpus[i], corpus[i + 1]);
    }
    fairaudit::MetricResult serial, parallel;
    const double s =
        time_ms([&] { serial = counterfactual_bleu(pairs, Exec::serial); });
    const double p =
        time_ms([&] { parallel = counterfactual_bleu(pairs, Exec::parallel); });
    const bool same = serial == parallel;
    all_identical = all_identical && same;
    report("counterfactual_bleu", s, p, same);

    const double s2 =
        time_ms([&] { serial = counterfactual_rouge_l(pairs, Exec::serial); });
    const double p2 = time_ms(
        [&] { parallel = counterfactual_rouge_l(pairs, Exec::parallel); });
    const bool same2 = serial == parallel;
    all_identical = all_identical && same2;
    report("counterfactual_rouge_l", s2, p2, same2);
  }

  {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < texts; ++i) ids.push_back("p" + std::to_string(i));
    fairaudit::ScoreMatrix matrix(ids, 25);
    for (std::size_t row = 0; row < texts; ++row) {
      for (int col = 0; col < 25; ++col) matrix.set(row, col, score(rng));
    }
    const fairaudit::ScoreMetricNames names{"expected_max", "probability",
                                            "fraction"};
    std::vector<fairaudit::MetricResult> serial, parallel;
    const double s = time_ms([&] {
      serial = classifier_score_metrics(matrix, 0.5, names, Exec::serial);
    });
    const double p = time_ms([&] {
      parallel = classifier_score_metrics(matrix, 0.5, names, Exec::parallel);
    });
    const bool same = serial == parallel;
    all_identical = all_identical && same;
    report("classifier_score", s, p, same);
  }

  std::printf("\n%s\n", all_identical
                            ? "parallel kernels match the serial reference"
                            : "PARALLEL/SERIAL MISMATCH");
  return all_identical ? 0 : 1;
}
