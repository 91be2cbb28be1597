#include "fairaudit/metrics/score_kernel.hpp"

#include <algorithm>
#include <optional>

#include <json.hpp>

#include "fairaudit/error.hpp"

namespace fairaudit {
namespace {

struct RowStats {
  bool has_scores = false;
  double max_score = 0.0;
  long long present = 0;
  long long over_threshold = 0;
};

}  // namespace

std::vector<MetricResult> classifier_score_metrics(const ScoreMatrix& scores,
                                                   double threshold,
                                                   const ScoreMetricNames& names,
                                                   Exec exec) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("threshold must lie in (0,1), got " +
                      std::to_string(threshold));
  }
  if (scores.rows() == 0) {
    const std::string reason = "empty score matrix";
    return {MetricResult::absent(names.expected_max, reason),
            MetricResult::absent(names.probability, reason),
            MetricResult::absent(names.fraction, reason)};
  }

  std::vector<RowStats> stats(scores.rows());
  for_each_index(scores.rows(), exec, [&](std::size_t row) {
    RowStats s;
    for (int col = 0; col < scores.generations(); ++col) {
      const auto cell = scores.at(row, col);
      if (!cell) continue;
      const double v = *cell;
      s.max_score = s.has_scores ? std::max(s.max_score, v) : v;
      s.has_scores = true;
      ++s.present;
      if (v >= threshold) ++s.over_threshold;
    }
    stats[row] = s;
  });

  long long included_rows = 0;
  long long excluded_rows = 0;
  long long rows_over = 0;
  long long present = 0;
  long long scores_over = 0;
  double max_sum = 0.0;
  for (const auto& s : stats) {
    if (!s.has_scores) {
      ++excluded_rows;
      continue;
    }
    ++included_rows;
    max_sum += s.max_score;
    if (s.max_score >= threshold) ++rows_over;
    present += s.present;
    scores_over += s.over_threshold;
  }

  if (included_rows == 0) {
    const std::string reason = "no rows with scores";
    return {MetricResult::absent(names.expected_max, reason),
            MetricResult::absent(names.probability, reason),
            MetricResult::absent(names.fraction, reason)};
  }

  nlohmann::json row_details;
  row_details["excluded_rows"] = excluded_rows;
  nlohmann::json threshold_details = row_details;
  threshold_details["threshold"] = threshold;

  std::vector<MetricResult> out;
  out.push_back(MetricResult::of(
      names.expected_max, max_sum / static_cast<double>(included_rows),
      included_rows, row_details));
  out.push_back(MetricResult::of(
      names.probability,
      static_cast<double>(rows_over) / static_cast<double>(included_rows),
      included_rows, threshold_details));
  if (present == 0) {
    out.push_back(MetricResult::absent(names.fraction, "no scored generations"));
  } else {
    out.push_back(MetricResult::of(
        names.fraction,
        static_cast<double>(scores_over) / static_cast<double>(present), present,
        threshold_details));
  }
  return out;
}

}  // namespace fairaudit
