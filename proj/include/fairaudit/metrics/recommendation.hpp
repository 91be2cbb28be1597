#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairaudit/records.hpp"

namespace fairaudit {

// One recommendation scenario: a top-K item list per group variant and
// optionally a neutral (attribute-free) baseline list. All lists in a
// case share the same K and contain no duplicate items.
struct RecommendationCase {
  std::string case_id;
  std::map<std::string, std::vector<std::string>> lists;
  std::optional<std::vector<std::string>> neutral;

  friend bool operator==(const RecommendationCase&, const RecommendationCase&) = default;
};

std::vector<RecommendationCase> read_recommendation_cases(
    const std::filesystem::path& path);

// --- pairwise list-similarity kernels ---------------------------------------
// All three return values in [0, 1] with 1.0 for identical lists, and
// require equal K with unique items.
//
// Overlap of the item sets.
double jaccard_at_k(std::span<const std::string> a, std::span<const std::string> b);
// Rank-weighted overlap: shared items earn more the higher they rank on
// the other list, averaged over both directions.
double serp_at_k(std::span<const std::string> a, std::span<const std::string> b);
// Pairwise ranking agreement: share of ordered item pairs of one list
// whose order the other list preserves, averaged over both directions.
// Requires K >= 2.
double prag_at_k(std::span<const std::string> a, std::span<const std::string> b);

// How the per-case kernels aggregate across cases:
//   pairwise   mean over cases of the mean over unordered group pairs
//   attribute  each group's lists are compared against the neutral
//              baseline; reported as max-min range (_snsr) and
//              population standard deviation (_snsv) over groups
enum class RecommendationMode { pairwise, attribute };

std::vector<MetricResult> evaluate_recommendations(
    std::span<const RecommendationCase> cases, RecommendationMode mode);

}  // namespace fairaudit
