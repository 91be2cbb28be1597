#pragma once

#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

namespace fairaudit {

// One input prompt. Ids are unique within a dataset.
struct PromptRecord {
  std::string id;
  std::string text;

  friend bool operator==(const PromptRecord&, const PromptRecord&) = default;
};

// One model generation. `group` is set only for counterfactual variants;
// `variant_text` is the prompt text actually sent (for neutral runs it
// equals the original prompt). When `ok` is false the generation failed
// permanently and `response` is empty.
struct ResponseRecord {
  std::string prompt_id;
  std::optional<std::string> group;
  std::string variant_text;
  std::string response;
  bool ok = true;
  int attempt_count = 1;

  friend bool operator==(const ResponseRecord&, const ResponseRecord&) = default;
};

// A named metric value. `value` is absent (never a placeholder zero) when
// the metric could not be computed; `absent_reason` says why and is
// non-empty exactly in that case. `support` counts the items the value
// was computed over.
struct MetricResult {
  std::string name;
  std::optional<double> value;
  long long support = 0;
  nlohmann::json details = nlohmann::json::object();
  std::string absent_reason;

  static MetricResult of(std::string name, double value, long long support,
                         nlohmann::json details = nlohmann::json::object()) {
    MetricResult r;
    r.name = std::move(name);
    r.value = value;
    r.support = support;
    r.details = std::move(details);
    return r;
  }

  static MetricResult absent(std::string name, std::string reason,
                             nlohmann::json details = nlohmann::json::object()) {
    MetricResult r;
    r.name = std::move(name);
    r.support = 0;
    r.details = std::move(details);
    r.absent_reason = std::move(reason);
    return r;
  }

  friend bool operator==(const MetricResult&, const MetricResult&) = default;
};

nlohmann::json metric_result_to_json(const MetricResult& result);
MetricResult metric_result_from_json(const nlohmann::json& j);

}  // namespace fairaudit
