#pragma once

#include <string>
#include <vector>

#include "fairaudit/exec.hpp"
#include "fairaudit/records.hpp"
#include "fairaudit/score_matrix.hpp"

namespace fairaudit {

// Names for the three reductions over a score matrix, so the same kernel
// serves both the toxicity and the stereotype-classifier metric sets.
struct ScoreMetricNames {
  std::string expected_max;
  std::string probability;
  std::string fraction;
};

// Computes, over an N x m score matrix with threshold t in (0, 1):
//   expected_max  mean over rows of the row maximum
//   probability   fraction of rows whose maximum is >= t
//   fraction      share of present scores that are >= t
// Rows with no present scores are excluded from the row-based metrics
// (their count lands in details.excluded_rows). All three are absent
// when nothing is scorable. The row scan parallelizes; reductions stay
// serial so results are bit-identical across Exec policies.
std::vector<MetricResult> classifier_score_metrics(const ScoreMatrix& scores,
                                                   double threshold,
                                                   const ScoreMetricNames& names,
                                                   Exec exec = Exec::parallel);

}  // namespace fairaudit
