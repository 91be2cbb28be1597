#include "fairaudit/metrics/recommendation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "fairaudit/dataset_io.hpp"
#include "fairaudit/error.hpp"

namespace fairaudit {
namespace {

void require_comparable(std::span<const std::string> a,
                        std::span<const std::string> b) {
  if (a.size() != b.size()) {
    throw ConfigError("ranked lists differ in length: " +
                      std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
  }
  if (a.empty()) {
    throw ConfigError("ranked lists must hold at least one item");
  }
  for (const auto* list : {&a, &b}) {
    std::set<std::string> unique(list->begin(), list->end());
    if (unique.size() != list->size()) {
      throw ConfigError("ranked list contains a duplicate item");
    }
  }
}

std::map<std::string, std::size_t> rank_of(std::span<const std::string> list) {
  std::map<std::string, std::size_t> ranks;
  for (std::size_t i = 0; i < list.size(); ++i) ranks[list[i]] = i + 1;
  return ranks;
}

double half_serp(std::span<const std::string> a,
                 const std::map<std::string, std::size_t>& rank_b,
                 std::size_t k) {
  double sum = 0.0;
  for (const auto& item : a) {
    const auto it = rank_b.find(item);
    if (it == rank_b.end()) continue;
    sum += static_cast<double>(k - it->second + 1);
  }
  return sum / (static_cast<double>(k) * static_cast<double>(k + 1) / 2.0);
}

double half_prag(std::span<const std::string> a,
                 const std::map<std::string, std::size_t>& rank_b,
                 std::size_t k) {
  long long agreeing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto it_u = rank_b.find(a[i]);
    if (it_u == rank_b.end()) continue;
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const auto it_v = rank_b.find(a[j]);
      if (it_v == rank_b.end() || it_u->second < it_v->second) ++agreeing;
    }
  }
  return static_cast<double>(agreeing) /
         (static_cast<double>(k) * static_cast<double>(k - 1) / 2.0);
}

struct ListKernel {
  std::string name;
  std::size_t min_k;
  double (*fn)(std::span<const std::string>, std::span<const std::string>);
};

const std::vector<ListKernel>& kernels() {
  static const std::vector<ListKernel> k = {
      {"jaccard", 1, jaccard_at_k},
      {"serp", 1, serp_at_k},
      {"prag", 2, prag_at_k},
  };
  return k;
}

std::size_t case_k(const RecommendationCase& c) {
  if (c.neutral) return c.neutral->size();
  return c.lists.begin()->second.size();
}

std::vector<MetricResult> evaluate_pairwise(
    std::span<const RecommendationCase> cases) {
  for (const auto& c : cases) {
    if (c.lists.size() < 2) {
      throw ConfigError("case \"" + c.case_id +
                        "\" needs at least two group lists for pairwise "
                        "comparison");
    }
  }
  std::vector<MetricResult> out;
  for (const auto& kernel : kernels()) {
    double sum = 0.0;
    long long included = 0;
    nlohmann::json per_case = nlohmann::json::object();
    for (const auto& c : cases) {
      if (case_k(c) < kernel.min_k) continue;
      double case_sum = 0.0;
      long long pair_count = 0;
      for (auto it_a = c.lists.begin(); it_a != c.lists.end(); ++it_a) {
        for (auto it_b = std::next(it_a); it_b != c.lists.end(); ++it_b) {
          case_sum += kernel.fn(it_a->second, it_b->second);
          ++pair_count;
        }
      }
      const double case_mean = case_sum / static_cast<double>(pair_count);
      per_case[c.case_id] = case_mean;
      sum += case_mean;
      ++included;
    }
    const std::string name = kernel.name + "_pairwise";
    if (included == 0) {
      out.push_back(MetricResult::absent(
          name, "no case has lists of length >= " +
                    std::to_string(kernel.min_k)));
      continue;
    }
    nlohmann::json details;
    details["per_case"] = per_case;
    out.push_back(MetricResult::of(name, sum / static_cast<double>(included),
                                   included, details));
  }
  return out;
}

std::vector<MetricResult> evaluate_attribute(
    std::span<const RecommendationCase> cases) {
  for (const auto& c : cases) {
    if (!c.neutral) {
      throw ConfigError("case \"" + c.case_id +
                        "\" has no neutral baseline list");
    }
    if (c.lists.empty()) {
      throw ConfigError("case \"" + c.case_id + "\" has no group lists");
    }
  }
  std::vector<MetricResult> out;
  for (const auto& kernel : kernels()) {
    std::map<std::string, double> group_sum;
    std::map<std::string, long long> group_cases;
    for (const auto& c : cases) {
      if (case_k(c) < kernel.min_k) continue;
      for (const auto& [group, list] : c.lists) {
        group_sum[group] += kernel.fn(list, *c.neutral);
        ++group_cases[group];
      }
    }
    const std::string range_name = kernel.name + "_snsr";
    const std::string spread_name = kernel.name + "_snsv";
    if (group_sum.empty()) {
      const std::string reason = "no case has lists of length >= " +
                                 std::to_string(kernel.min_k);
      out.push_back(MetricResult::absent(range_name, reason));
      out.push_back(MetricResult::absent(spread_name, reason));
      continue;
    }
    std::map<std::string, double> similarity;
    for (const auto& [group, sum] : group_sum) {
      similarity[group] = sum / static_cast<double>(group_cases.at(group));
    }
    double lo = similarity.begin()->second;
    double hi = lo;
    double mean = 0.0;
    for (const auto& [group, s] : similarity) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      mean += s;
    }
    mean /= static_cast<double>(similarity.size());
    double var = 0.0;
    for (const auto& [group, s] : similarity) var += (s - mean) * (s - mean);
    var /= static_cast<double>(similarity.size());

    nlohmann::json details;
    details["group_similarity"] = similarity;
    const auto support = static_cast<long long>(similarity.size());
    out.push_back(MetricResult::of(range_name, hi - lo, support, details));
    out.push_back(MetricResult::of(spread_name, std::sqrt(var), support, details));
  }
  return out;
}

}  // namespace

std::vector<RecommendationCase> read_recommendation_cases(
    const std::filesystem::path& path) {
  std::vector<RecommendationCase> cases;
  std::map<std::string, std::size_t> index_of;
  for_each_jsonl_object(path, [&](std::size_t line, const nlohmann::json& j) {
    const std::string at = path.string() + ":" + std::to_string(line);
    if (!j.contains("case_id") || !j.at("case_id").is_string() ||
        j.at("case_id").get<std::string>().empty()) {
      throw IoError("missing or empty 'case_id' at " + at);
    }
    if (!j.contains("group") || !j.at("group").is_string() ||
        j.at("group").get<std::string>().empty()) {
      throw IoError("missing or empty 'group' at " + at);
    }
    if (!j.contains("items") || !j.at("items").is_array() ||
        j.at("items").empty()) {
      throw IoError("missing or empty 'items' array at " + at);
    }
    const auto case_id = j.at("case_id").get<std::string>();
    const auto group = j.at("group").get<std::string>();
    std::vector<std::string> items;
    std::set<std::string> unique;
    for (const auto& item : j.at("items")) {
      if (!item.is_string() || item.get<std::string>().empty()) {
        throw IoError("non-string or empty item at " + at);
      }
      auto s = item.get<std::string>();
      if (!unique.insert(s).second) {
        throw IoError("duplicate item \"" + s + "\" at " + at);
      }
      items.push_back(std::move(s));
    }

    auto [it, fresh] = index_of.try_emplace(case_id, cases.size());
    if (fresh) {
      cases.emplace_back();
      cases.back().case_id = case_id;
    }
    RecommendationCase& c = cases[it->second];
    if (group == "neutral") {
      if (c.neutral) {
        throw IoError("second neutral list for case \"" + case_id + "\" at " +
                      at);
      }
      c.neutral = std::move(items);
    } else {
      if (!c.lists.emplace(group, std::move(items)).second) {
        throw IoError("second \"" + group + "\" list for case \"" + case_id +
                      "\" at " + at);
      }
    }
  });
  for (const auto& c : cases) {
    std::size_t k = 0;
    if (c.neutral) k = c.neutral->size();
    for (const auto& [group, list] : c.lists) {
      if (k == 0) k = list.size();
      if (list.size() != k) {
        throw IoError("case \"" + c.case_id +
                      "\" mixes list lengths (" + std::to_string(list.size()) +
                      " vs " + std::to_string(k) + ")");
      }
    }
    if (c.neutral && c.neutral->size() != k) {
      throw IoError("case \"" + c.case_id + "\" mixes list lengths");
    }
  }
  return cases;
}

double jaccard_at_k(std::span<const std::string> a,
                    std::span<const std::string> b) {
  require_comparable(a, b);
  const std::set<std::string> set_a(a.begin(), a.end());
  long long shared = 0;
  for (const auto& item : b) shared += set_a.count(item) ? 1 : 0;
  const auto total = static_cast<long long>(a.size() + b.size()) - shared;
  return static_cast<double>(shared) / static_cast<double>(total);
}

double serp_at_k(std::span<const std::string> a, std::span<const std::string> b) {
  require_comparable(a, b);
  const auto rank_a = rank_of(a);
  const auto rank_b = rank_of(b);
  return (half_serp(a, rank_b, a.size()) + half_serp(b, rank_a, b.size())) / 2.0;
}

double prag_at_k(std::span<const std::string> a, std::span<const std::string> b) {
  require_comparable(a, b);
  if (a.size() < 2) {
    throw ConfigError("ranking agreement needs lists of length >= 2");
  }
  const auto rank_a = rank_of(a);
  const auto rank_b = rank_of(b);
  return (half_prag(a, rank_b, a.size()) + half_prag(b, rank_a, b.size())) / 2.0;
}

std::vector<MetricResult> evaluate_recommendations(
    std::span<const RecommendationCase> cases, RecommendationMode mode) {
  if (cases.empty()) {
    throw ConfigError("no recommendation cases to evaluate");
  }
  return mode == RecommendationMode::pairwise ? evaluate_pairwise(cases)
                                              : evaluate_attribute(cases);
}

}  // namespace fairaudit
