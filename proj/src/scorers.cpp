#include "fairaudit/scorers.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "fairaudit/builtin_data.hpp"
#include "fairaudit/dataset_io.hpp"
#include "fairaudit/error.hpp"
#include "fairaudit/tokenize.hpp"
#include "http_endpoint.hpp"

namespace fairaudit {
namespace {

constexpr double kBoosterShift = 0.293;
constexpr double kNegationScalar = -0.74;
constexpr double kNormalizationAlpha = 15.0;
constexpr int kNegationLookback = 3;

constexpr std::size_t kScoreBatchSize = 100;
constexpr std::size_t kScoreConcurrency = 10;
constexpr double kScoreTimeoutS = 60.0;

const std::set<std::string>& negator_tokens() {
  static const std::set<std::string> s = {
      "ain't",   "aint",     "aren't",    "arent",   "cannot",  "can't",
      "cant",    "couldn't", "couldnt",   "didn't",  "didnt",   "doesn't",
      "doesnt",  "don't",    "dont",      "hadn't",  "hadnt",   "hasn't",
      "hasnt",   "haven't",  "havent",    "isn't",   "isnt",    "mightn't",
      "mightnt", "mustn't",  "mustnt",    "neither", "never",   "no",
      "nobody",  "none",     "nope",      "nor",     "not",     "nothing",
      "nowhere", "rarely",   "seldom",    "shouldn't", "shouldnt", "wasn't",
      "wasnt",   "weren't",  "werent",    "without", "won't",   "wont",
      "wouldn't", "wouldnt"};
  return s;
}

// +1 intensifies, -1 dampens.
int booster_direction(const std::string& token) {
  static const std::set<std::string> up = {
      "absolutely",  "amazingly",   "completely",   "considerably",
      "decidedly",   "deeply",      "enormously",   "entirely",
      "especially",  "exceptionally", "extremely",  "greatly",
      "highly",      "hugely",      "incredibly",   "intensely",
      "majorly",     "particularly", "purely",      "quite",
      "really",      "remarkably",  "so",           "substantially",
      "thoroughly",  "totally",     "tremendously", "unbelievably",
      "unusually",   "utterly",     "very"};
  static const std::set<std::string> down = {
      "almost",  "barely", "hardly",       "kinda",    "marginally",
      "occasionally", "partly", "scarcely", "slightly", "somewhat",
      "sorta"};
  if (up.count(token)) return 1;
  if (down.count(token)) return -1;
  return 0;
}

}  // namespace

ScorerSpec ScorerSpec::parse(std::string_view flag) {
  const std::string s(flag);
  if (s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0) {
    return remote(s);
  }
  if (s.rfind("file:", 0) == 0) {
    std::string path = s.substr(5);
    if (path.empty()) throw ConfigError("file scorer needs a path: " + s);
    return from_path(std::move(path));
  }
  if (s == "builtin:sentiment") return builtin_sentiment();
  throw ConfigError("unrecognized scorer \"" + s +
                    "\" (expected http(s)://..., file:PATH, or "
                    "builtin:sentiment)");
}

ScorerSpec ScorerSpec::remote(std::string url) {
  detail::parse_http_endpoint(url);
  ScorerSpec spec;
  spec.kind = ScorerKind::remote;
  while (url.size() > 8 && url.back() == '/') url.pop_back();
  spec.url = std::move(url);
  return spec;
}

ScorerSpec ScorerSpec::from_path(std::string path) {
  ScorerSpec spec;
  spec.kind = ScorerKind::file;
  spec.path = std::move(path);
  return spec;
}

ScorerSpec ScorerSpec::builtin_sentiment() { return ScorerSpec{}; }

std::string ScorerSpec::label() const {
  switch (kind) {
    case ScorerKind::remote:
      return url;
    case ScorerKind::file:
      return "file:" + path;
    case ScorerKind::builtin_sentiment:
      return "builtin:sentiment";
  }
  return "?";
}

const SentimentLexicon& SentimentLexicon::builtin() {
  static const SentimentLexicon lex =
      from_text(builtin::sentiment_lexicon_text(), "<builtin>");
  return lex;
}

SentimentLexicon SentimentLexicon::from_text(std::string_view text,
                                             const std::string& origin) {
  SentimentLexicon lex;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    std::string term;
    double valence = 0.0;
    std::string extra;
    if (!(row >> term >> valence) || (row >> extra)) {
      throw ConfigError("sentiment lexicon line " + std::to_string(line_no) +
                        " is not \"term value\" (" + origin + ")");
    }
    if (!(valence >= -4.0 && valence <= 4.0)) {
      throw ConfigError("valence out of [-4,4] for \"" + term + "\" (" + origin +
                        ")");
    }
    const std::string canon = to_lower(term);
    if (!lex.valences_.emplace(canon, valence).second) {
      throw ConfigError("duplicate sentiment term \"" + canon + "\" (" + origin +
                        ")");
    }
  }
  if (lex.valences_.empty()) {
    throw ConfigError("sentiment lexicon is empty (" + origin + ")");
  }
  return lex;
}

SentimentLexicon SentimentLexicon::from_file(const std::filesystem::path& path) {
  return from_text(read_text_file(path), path.string());
}

std::optional<double> SentimentLexicon::valence(const std::string& term) const {
  const auto it = valences_.find(term);
  if (it == valences_.end()) return std::nullopt;
  return it->second;
}

double sentiment_score(std::string_view text, const SentimentLexicon& lexicon) {
  const auto tokens = tokenize(text);
  double sum = 0.0;
  bool any_hit = false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto v = lexicon.valence(tokens[i]);
    if (!v) continue;
    any_hit = true;
    double val = *v;
    if (i > 0) {
      const int dir = booster_direction(tokens[i - 1]);
      if (dir != 0) {
        const double shift = kBoosterShift * dir;
        val += (val < 0.0) ? -shift : shift;
      }
    }
    for (int back = 1; back <= kNegationLookback && back <= static_cast<int>(i);
         ++back) {
      if (negator_tokens().count(tokens[i - static_cast<std::size_t>(back)])) {
        val *= kNegationScalar;
        break;
      }
    }
    sum += val;
  }
  if (!any_hit) return 0.5;
  const double compound = sum / std::sqrt(sum * sum + kNormalizationAlpha);
  return (compound + 1.0) / 2.0;
}

double sentiment_score(std::string_view text) {
  return sentiment_score(text, SentimentLexicon::builtin());
}

std::vector<double> sentiment_scores(std::span<const std::string> texts,
                                     const SentimentLexicon& lexicon, Exec exec) {
  std::vector<double> out(texts.size());
  for_each_index(texts.size(), exec,
                 [&](std::size_t i) { out[i] = sentiment_score(texts[i], lexicon); });
  return out;
}

std::vector<double> ensemble_scores(
    const std::vector<std::vector<double>>& per_scorer_scores, EnsembleRule rule) {
  if (per_scorer_scores.empty()) {
    throw ConfigError("ensemble needs at least one scorer output");
  }
  const std::size_t n = per_scorer_scores.front().size();
  for (const auto& scores : per_scorer_scores) {
    if (scores.size() != n) {
      throw ConfigError("ensemble score lists differ in length");
    }
    for (const double s : scores) {
      if (!(s >= 0.0 && s <= 1.0)) {
        throw ConfigError("ensemble score out of [0,1]: " + std::to_string(s));
      }
    }
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rule == EnsembleRule::max) {
      double m = 0.0;
      for (const auto& scores : per_scorer_scores) m = std::max(m, scores[i]);
      out[i] = m;
    } else {
      double sum = 0.0;
      for (const auto& scores : per_scorer_scores) sum += scores[i];
      out[i] = sum / static_cast<double>(per_scorer_scores.size());
    }
  }
  return out;
}

Scorer::Scorer(ScorerSpec spec, Exec exec) : spec_(std::move(spec)), exec_(exec) {
  if (spec_.kind == ScorerKind::file) {
    for_each_jsonl_object(spec_.path, [&](std::size_t line, const nlohmann::json& j) {
      if (!j.contains("index") || !j.at("index").is_number_integer()) {
        throw IoError("missing or non-integer 'index' at " + spec_.path + ":" +
                      std::to_string(line));
      }
      if (!j.contains("score") || !j.at("score").is_number()) {
        throw IoError("missing or non-numeric 'score' at " + spec_.path + ":" +
                      std::to_string(line));
      }
      const long long index = j.at("index").get<long long>();
      const double score = j.at("score").get<double>();
      if (index < 0) {
        throw IoError("negative index at " + spec_.path + ":" +
                      std::to_string(line));
      }
      if (!(score >= 0.0 && score <= 1.0)) {
        throw IoError("score out of [0,1] at " + spec_.path + ":" +
                      std::to_string(line));
      }
      if (!file_scores_.emplace(index, score).second) {
        throw IoError("duplicate index " + std::to_string(index) + " at " +
                      spec_.path + ":" + std::to_string(line));
      }
    });
  } else if (spec_.kind == ScorerKind::remote) {
    detail::parse_http_endpoint(spec_.url);
  }
}

std::vector<double> Scorer::score_texts(std::span<const std::string> texts) const {
  switch (spec_.kind) {
    case ScorerKind::builtin_sentiment:
      return sentiment_scores(texts, SentimentLexicon::builtin(), exec_);
    case ScorerKind::file:
      return score_from_file(texts);
    case ScorerKind::remote:
      return score_remote(texts);
  }
  throw ConfigError("unknown scorer kind");
}

std::vector<double> Scorer::score_from_file(
    std::span<const std::string> texts) const {
  std::vector<double> out(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto it = file_scores_.find(static_cast<long long>(i));
    if (it == file_scores_.end()) {
      throw ProtocolError("file scorer " + spec_.path +
                          " has no score for text index " + std::to_string(i));
    }
    out[i] = it->second;
  }
  return out;
}

std::vector<double> Scorer::score_remote(std::span<const std::string> texts) const {
  if (texts.empty()) return {};
  const auto ep = detail::parse_http_endpoint(spec_.url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (ep.https) {
    throw ConfigError("built without TLS support; use an http:// scorer");
  }
#endif
  const std::string path = ep.prefix + "/score";
  const std::size_t batch_count =
      (texts.size() + kScoreBatchSize - 1) / kScoreBatchSize;
  std::vector<std::vector<double>> batches(batch_count);
  std::atomic<std::size_t> next{0};
  const std::size_t worker_count = std::min(kScoreConcurrency, batch_count);
  std::vector<std::exception_ptr> worker_errors(worker_count);
  std::vector<std::thread> workers;
  workers.reserve(worker_count);
  for (std::size_t w = 0; w < worker_count; ++w) {
    workers.emplace_back([&, w] {
      try {
        httplib::Client cli(ep.base);
        cli.set_connection_timeout(static_cast<time_t>(kScoreTimeoutS), 0);
        cli.set_read_timeout(static_cast<time_t>(kScoreTimeoutS), 0);
        cli.set_write_timeout(static_cast<time_t>(kScoreTimeoutS), 0);
        while (true) {
          const std::size_t b = next.fetch_add(1);
          if (b >= batch_count) break;
          const std::size_t begin = b * kScoreBatchSize;
          const std::size_t end = std::min(begin + kScoreBatchSize, texts.size());
          nlohmann::json body;
          auto arr = nlohmann::json::array();
          for (std::size_t i = begin; i < end; ++i) arr.push_back(texts[i]);
          body["texts"] = std::move(arr);
          auto res = cli.Post(path, body.dump(), "application/json");
          if (!res) {
            throw ProtocolError("score endpoint unreachable: " + spec_.url +
                                " (" + httplib::to_string(res.error()) + ")");
          }
          if (res->status != 200) {
            throw ProtocolError("score endpoint " + spec_.url +
                                " returned HTTP " + std::to_string(res->status));
          }
          nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
          if (j.is_discarded() || !j.is_object() || !j.contains("scores") ||
              !j.at("scores").is_array()) {
            throw ProtocolError("score endpoint " + spec_.url +
                                " returned malformed JSON");
          }
          const auto& scores = j.at("scores");
          if (scores.size() != end - begin) {
            throw ProtocolError(
                "score endpoint " + spec_.url + " returned " +
                std::to_string(scores.size()) + " scores for " +
                std::to_string(end - begin) + " texts");
          }
          auto& out = batches[b];
          out.reserve(scores.size());
          for (const auto& s : scores) {
            if (!s.is_number()) {
              throw ProtocolError("score endpoint " + spec_.url +
                                  " returned a non-numeric score");
            }
            const double v = s.get<double>();
            if (!(v >= 0.0 && v <= 1.0)) {
              throw ProtocolError("score endpoint " + spec_.url +
                                  " returned out-of-range score " +
                                  std::to_string(v));
            }
            out.push_back(v);
          }
        }
      } catch (...) {
        worker_errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& e : worker_errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<double> out;
  out.reserve(texts.size());
  for (const auto& batch : batches) out.insert(out.end(), batch.begin(), batch.end());
  return out;
}

std::vector<std::vector<double>> embed_texts(const std::string& url,
                                             std::span<const std::string> texts) {
  if (texts.empty()) return {};
  const auto ep = detail::parse_http_endpoint(url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (ep.https) {
    throw ConfigError("built without TLS support; use an http:// endpoint");
  }
#endif
  const std::string path = ep.prefix + "/embed";
  httplib::Client cli(ep.base);
  cli.set_connection_timeout(static_cast<time_t>(kScoreTimeoutS), 0);
  cli.set_read_timeout(static_cast<time_t>(kScoreTimeoutS), 0);
  cli.set_write_timeout(static_cast<time_t>(kScoreTimeoutS), 0);
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  std::size_t dimension = 0;
  for (std::size_t begin = 0; begin < texts.size(); begin += kScoreBatchSize) {
    const std::size_t end = std::min(begin + kScoreBatchSize, texts.size());
    nlohmann::json body;
    auto arr = nlohmann::json::array();
    for (std::size_t i = begin; i < end; ++i) arr.push_back(texts[i]);
    body["texts"] = std::move(arr);
    auto res = cli.Post(path, body.dump(), "application/json");
    if (!res) {
      throw ProtocolError("embed endpoint unreachable: " + url + " (" +
                          httplib::to_string(res.error()) + ")");
    }
    if (res->status != 200) {
      throw ProtocolError("embed endpoint " + url + " returned HTTP " +
                          std::to_string(res->status));
    }
    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("vectors") ||
        !j.at("vectors").is_array()) {
      throw ProtocolError("embed endpoint " + url + " returned malformed JSON");
    }
    const auto& vectors = j.at("vectors");
    if (vectors.size() != end - begin) {
      throw ProtocolError("embed endpoint " + url + " returned " +
                          std::to_string(vectors.size()) + " vectors for " +
                          std::to_string(end - begin) + " texts");
    }
    for (const auto& vec : vectors) {
      if (!vec.is_array() || vec.empty()) {
        throw ProtocolError("embed endpoint " + url +
                            " returned an empty or non-array vector");
      }
      std::vector<double> v;
      v.reserve(vec.size());
      for (const auto& x : vec) {
        if (!x.is_number()) {
          throw ProtocolError("embed endpoint " + url +
                              " returned a non-numeric component");
        }
        v.push_back(x.get<double>());
      }
      if (dimension == 0) {
        dimension = v.size();
      } else if (v.size() != dimension) {
        throw ProtocolError("embed endpoint " + url +
                            " returned vectors of mixed dimension");
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace fairaudit
