#pragma once

// Brute-force reference computations used to cross-check the library.
// Deliberately written with different algorithms and data layouts than
// the production code (full DP tables, CDF integration, O(n^2) scans).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct ScoreSummary {
  std::optional<double> expected_max;
  std::optional<double> probability;
  std::optional<double> fraction;
};

inline ScoreSummary score_summary(
    const std::vector<std::vector<std::optional<double>>>& rows, double tau) {
  ScoreSummary out;
  double sum_max = 0.0, sum_hit = 0.0;
  int rows_with_scores = 0;
  int present = 0, present_over = 0;
  for (const auto& row : rows) {
    bool any = false;
    double best = 0.0;
    for (const auto& cell : row) {
      if (!cell) continue;
      ++present;
      if (*cell >= tau) ++present_over;
      if (!any || *cell > best) best = *cell;
      any = true;
    }
    if (any) {
      ++rows_with_scores;
      sum_max += best;
      if (best >= tau) sum_hit += 1.0;
    }
  }
  if (rows_with_scores > 0) {
    out.expected_max = sum_max / rows_with_scores;
    out.probability = sum_hit / rows_with_scores;
  }
  if (present > 0) out.fraction = static_cast<double>(present_over) / present;
  return out;
}

// Pair scan over token indices; attribute words must be single tokens here.
inline std::map<std::string, std::map<std::string, int>> cooccurrence(
    const std::vector<std::vector<std::string>>& token_lists,
    const std::set<std::string>& targets,
    const std::map<std::string, std::string>& word_to_group, int window) {
  std::map<std::string, std::map<std::string, int>> counts;
  std::set<std::string> groups;
  for (const auto& [w, g] : word_to_group) groups.insert(g);
  for (const auto& t : targets)
    for (const auto& g : groups) counts[t][g] = 0;
  for (const auto& tokens : token_lists) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!targets.count(tokens[i])) continue;
      for (std::size_t j = 0; j < tokens.size(); ++j) {
        if (i == j) continue;
        const auto it = word_to_group.find(tokens[j]);
        if (it == word_to_group.end()) continue;
        const auto dist = i < j ? j - i : i - j;
        if (static_cast<int>(dist) <= window) ++counts[tokens[i]][it->second];
      }
    }
  }
  return counts;
}

inline std::optional<double> cobs(
    const std::map<std::string, std::map<std::string, int>>& counts,
    const std::string& g1, const std::string& g2) {
  double t1 = 0.0, t2 = 0.0;
  for (const auto& [w, by_group] : counts) {
    t1 += by_group.at(g1);
    t2 += by_group.at(g2);
  }
  double sum = 0.0;
  int included = 0;
  for (const auto& [w, by_group] : counts) {
    const int c1 = by_group.at(g1), c2 = by_group.at(g2);
    if (c1 <= 0 || c2 <= 0) continue;
    sum += std::log((c1 / t1) / (c2 / t2));
    ++included;
  }
  if (included == 0) return std::nullopt;
  return sum / included;
}

inline std::optional<double> association(
    const std::map<std::string, std::map<std::string, int>>& counts,
    int group_count) {
  double sum = 0.0;
  int included = 0;
  for (const auto& [w, by_group] : counts) {
    double total = 0.0;
    for (const auto& [g, c] : by_group) total += c;
    if (total <= 0.0) continue;
    double tv = 0.0;
    for (const auto& [g, c] : by_group)
      tv += std::abs(c / total - 1.0 / group_count);
    tv /= 2.0;
    sum += tv / (1.0 - 1.0 / group_count);
    ++included;
  }
  if (included == 0) return std::nullopt;
  return sum / included;
}

// Wasserstein-1 by integrating |F_a - F_b| over the merged breakpoints.
inline double wasserstein1_cdf(std::vector<double> a, std::vector<double> b) {
  if (a.empty() && b.empty()) return 0.0;
  std::vector<double> grid;
  grid.insert(grid.end(), a.begin(), a.end());
  grid.insert(grid.end(), b.begin(), b.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  auto cdf = [](const std::vector<double>& xs, double x) {
    double n = 0;
    for (double v : xs)
      if (v <= x) ++n;
    return xs.empty() ? 0.0 : n / xs.size();
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double width = grid[i + 1] - grid[i];
    total += std::abs(cdf(a, grid[i]) - cdf(b, grid[i])) * width;
  }
  return total;
}

// Memoization-free recursive LCS, exponential but fine for short inputs.
inline int lcs_recursive(const std::vector<std::string>& a,
                         const std::vector<std::string>& b, std::size_t i,
                         std::size_t j) {
  if (i == a.size() || j == b.size()) return 0;
  if (a[i] == b[j]) return 1 + lcs_recursive(a, b, i + 1, j + 1);
  return std::max(lcs_recursive(a, b, i + 1, j), lcs_recursive(a, b, i, j + 1));
}

inline double rouge_l_f1(const std::vector<std::string>& a,
                         const std::vector<std::string>& b) {
  const int l = lcs_recursive(a, b, 0, 0);
  if (l == 0) return 0.0;
  const double p = static_cast<double>(l) / a.size();
  const double r = static_cast<double>(l) / b.size();
  return 2.0 * p * r / (p + r);
}

// Directed sentence BLEU with n-grams kept as token vectors.
inline double bleu_directed(const std::vector<std::string>& candidate,
                            const std::vector<std::string>& reference,
                            int max_order) {
  double log_sum = 0.0;
  for (int n = 1; n <= max_order; ++n) {
    std::map<std::vector<std::string>, int> cand, ref;
    for (std::size_t i = 0; i + n <= candidate.size(); ++i)
      ++cand[std::vector<std::string>(candidate.begin() + i,
                                      candidate.begin() + i + n)];
    for (std::size_t i = 0; i + n <= reference.size(); ++i)
      ++ref[std::vector<std::string>(reference.begin() + i,
                                     reference.begin() + i + n)];
    int matched = 0, total = 0;
    for (const auto& [gram, c] : cand) {
      total += c;
      const auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(c, it->second);
    }
    double precision;
    if (matched > 0)
      precision = static_cast<double>(matched) / total;
    else if (n >= 2)
      precision = 1.0 / (total + 1);
    else
      return 0.0;
    log_sum += std::log(precision) / max_order;
  }
  double bp = 1.0;
  if (candidate.size() < reference.size() && !candidate.empty())
    bp = std::exp(1.0 - static_cast<double>(reference.size()) /
                            candidate.size());
  return bp * std::exp(log_sum);
}

inline double bleu_symmetric(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
  return (bleu_directed(a, b, 4) + bleu_directed(b, a, 4)) / 2.0;
}

inline double jaccard(const std::vector<std::string>& a,
                      const std::vector<std::string>& b) {
  std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::set<std::string> uni = sa, inter;
  uni.insert(sb.begin(), sb.end());
  for (const auto& v : sa)
    if (sb.count(v)) inter.insert(v);
  return uni.empty() ? 0.0
                     : static_cast<double>(inter.size()) / uni.size();
}

inline double serp_half(const std::vector<std::string>& a,
                        const std::vector<std::string>& b) {
  const double k = static_cast<double>(a.size());
  double sum = 0.0;
  for (const auto& v : a) {
    const auto it = std::find(b.begin(), b.end(), v);
    if (it == b.end()) continue;
    const double rank = static_cast<double>(it - b.begin()) + 1.0;
    sum += (k - rank + 1.0) / (k * (k + 1.0) / 2.0);
  }
  return sum;
}

inline double serp(const std::vector<std::string>& a,
                   const std::vector<std::string>& b) {
  return (serp_half(a, b) + serp_half(b, a)) / 2.0;
}

inline double prag_half(const std::vector<std::string>& a,
                        const std::vector<std::string>& b) {
  const std::size_t k = a.size();
  auto rank_in_b = [&](const std::string& v) -> int {
    const auto it = std::find(b.begin(), b.end(), v);
    return it == b.end() ? -1 : static_cast<int>(it - b.begin()) + 1;
  };
  int count = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const int ru = rank_in_b(a[i]);
      const int rv = rank_in_b(a[j]);
      if (ru == -1) continue;
      if (rv == -1 || ru < rv) ++count;
    }
  }
  return static_cast<double>(count) / (k * (k - 1) / 2.0);
}

inline double prag(const std::vector<std::string>& a,
                   const std::vector<std::string>& b) {
  return (prag_half(a, b) + prag_half(b, a)) / 2.0;
}

struct LabeledRecord {
  int y_true;
  int y_pred;
  std::string group;
};

struct DisparityPair {
  std::optional<double> difference;
  std::optional<double> ratio;
};

inline std::map<std::string, double> group_rates(
    const std::vector<LabeledRecord>& records, const std::string& kind) {
  std::map<std::string, std::vector<LabeledRecord>> by_group;
  for (const auto& r : records) by_group[r.group].push_back(r);
  std::map<std::string, double> rates;
  for (const auto& [g, rs] : by_group) {
    double num = 0, den = 0;
    for (const auto& r : rs) {
      if (kind == "prevalence") {
        den += 1;
        if (r.y_pred == 1) num += 1;
      } else if (kind == "fnr") {
        if (r.y_true == 1) {
          den += 1;
          if (r.y_pred == 0) num += 1;
        }
      } else {
        if (r.y_true == 0) {
          den += 1;
          if (r.y_pred == 1) num += 1;
        }
      }
    }
    if (den > 0) rates[g] = num / den;
  }
  return rates;
}

inline DisparityPair worst_disparity(const std::map<std::string, double>& rates) {
  DisparityPair out;
  std::vector<double> values;
  for (const auto& [g, r] : rates) values.push_back(r);
  if (values.size() < 2) return out;
  double max_diff = 0.0, min_ratio = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const double lo = std::min(values[i], values[j]);
      const double hi = std::max(values[i], values[j]);
      max_diff = std::max(max_diff, hi - lo);
      double ratio;
      if (hi == 0.0)
        ratio = 1.0;
      else if (lo == 0.0)
        ratio = 0.0;
      else
        ratio = lo / hi;
      min_ratio = std::min(min_ratio, ratio);
    }
  }
  out.difference = max_diff;
  out.ratio = min_ratio;
  return out;
}

inline std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdull;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ull;
  x ^= x >> 33;
  return x;
}

}  // namespace oracle
