#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fairaudit/lexicon.hpp"
#include "fairaudit/records.hpp"

namespace fairaudit {

// A group of related metrics. A family is either present with results
// (individual results may still be absent with their own reasons) or
// absent as a whole, e.g. when its scorer was unreachable.
struct MetricFamily {
  std::vector<MetricResult> results;
  std::string absent_reason;

  bool present() const { return absent_reason.empty(); }

  friend bool operator==(const MetricFamily&, const MetricFamily&) = default;
};

// Counterfactual metrics for one (attribute, group pair) comparison.
struct CounterfactualComparison {
  std::string attribute;
  std::string group_a;
  std::string group_b;
  std::vector<MetricResult> results;

  friend bool operator==(const CounterfactualComparison&,
                         const CounterfactualComparison&) = default;
};

struct CounterfactualSection {
  std::vector<CounterfactualComparison> comparisons;
  std::string absent_reason;  // e.g. "FTU satisfied"

  bool present() const { return absent_reason.empty(); }

  friend bool operator==(const CounterfactualSection&,
                         const CounterfactualSection&) = default;
};

struct FtuSection {
  bool checked = false;
  bool satisfied = true;
  long long total_matches = 0;
  std::vector<FtuReport> attributes;

  friend bool operator==(const FtuSection&, const FtuSection&) = default;
};

// The full evaluation output. `metadata` echoes the effective
// configuration and run statistics; everything under metadata.run
// (timestamps, durations) is volatile, the rest is deterministic for a
// fixed input and configuration.
struct AutoEvalReport {
  FtuSection ftu;
  MetricFamily toxicity;
  MetricFamily stereotype;
  CounterfactualSection counterfactual;
  nlohmann::json metadata = nlohmann::json::object();

  friend bool operator==(const AutoEvalReport&, const AutoEvalReport&) = default;
};

nlohmann::json report_to_json(const AutoEvalReport& report);
AutoEvalReport report_from_json(const nlohmann::json& j);

// Canonical serialized form: sorted keys, two-space indent, trailing
// newline. Two runs over the same inputs differ only under metadata.run.
std::string render_json(const AutoEvalReport& report);

// Human-readable summary derived from the same data; numeric values are
// rendered with four decimal places.
std::string render_markdown(const AutoEvalReport& report);

}  // namespace fairaudit
