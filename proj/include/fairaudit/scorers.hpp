#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairaudit/exec.hpp"

namespace fairaudit {

// Where classifier scores come from:
//   remote            POST {url}/score {"texts": [...]} -> {"scores": [...]}
//   file              JSONL of {"index": i, "score": s} keyed by text position
//   builtin_sentiment the rule-based sentiment scorer below
enum class ScorerKind { remote, file, builtin_sentiment };

struct ScorerSpec {
  ScorerKind kind = ScorerKind::builtin_sentiment;
  std::string url;   // remote
  std::string path;  // file

  // Flag syntax: "http://..." or "https://..." for remote,
  // "file:scores.jsonl" for file, "builtin:sentiment" for the built-in.
  static ScorerSpec parse(std::string_view flag);

  static ScorerSpec remote(std::string url);
  static ScorerSpec from_path(std::string path);
  static ScorerSpec builtin_sentiment();

  // Stable human-readable identity, echoed into report metadata.
  std::string label() const;

  friend bool operator==(const ScorerSpec&, const ScorerSpec&) = default;
};

// Term -> valence in [-4, 4]. File format: one "term value" pair per
// line, '#' comments allowed.
class SentimentLexicon {
 public:
  static const SentimentLexicon& builtin();
  static SentimentLexicon from_text(std::string_view text,
                                    const std::string& origin = "<inline>");
  static SentimentLexicon from_file(const std::filesystem::path& path);

  std::optional<double> valence(const std::string& term) const;
  std::size_t size() const { return valences_.size(); }

 private:
  std::map<std::string, double> valences_;
};

// Rule-based sentiment in [0, 1]; 0.5 is neutral and is returned exactly
// when no lexicon term occurs. Case-insensitive. A booster or dampener
// token immediately before a term shifts its valence by 0.293 along or
// against the valence's sign; a negator within the three preceding
// tokens multiplies it by -0.74. The summed valence S is squashed to
// S / sqrt(S^2 + 15) and mapped linearly onto [0, 1].
double sentiment_score(std::string_view text);
double sentiment_score(std::string_view text, const SentimentLexicon& lexicon);
std::vector<double> sentiment_scores(std::span<const std::string> texts,
                                     const SentimentLexicon& lexicon,
                                     Exec exec = Exec::parallel);

// Element-wise combination of several scorers' outputs over the same
// texts. Lists must agree in length and contain values in [0, 1].
enum class EnsembleRule { max, mean };
std::vector<double> ensemble_scores(
    const std::vector<std::vector<double>>& per_scorer_scores, EnsembleRule rule);

// A ready-to-use scorer built from a spec. Remote scorers send batches
// of up to 100 texts with at most 10 batches in flight; responses must
// echo one score in [0, 1] per text or the call raises ProtocolError.
class Scorer {
 public:
  explicit Scorer(ScorerSpec spec, Exec exec = Exec::parallel);

  std::vector<double> score_texts(std::span<const std::string> texts) const;

  const ScorerSpec& spec() const { return spec_; }
  std::string label() const { return spec_.label(); }

 private:
  std::vector<double> score_remote(std::span<const std::string> texts) const;
  std::vector<double> score_from_file(std::span<const std::string> texts) const;

  ScorerSpec spec_;
  Exec exec_ = Exec::parallel;
  std::map<long long, double> file_scores_;
};

// POST {url}/embed {"texts": [...]} -> {"vectors": [[...], ...]}, all
// rows of one dimension. Used by the embedding-backed counterfactual
// cosine metric.
std::vector<std::vector<double>> embed_texts(const std::string& url,
                                             std::span<const std::string> texts);

}  // namespace fairaudit
