#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fairaudit/records.hpp"

namespace fairaudit {

// One labeled prediction with its protected-group tag. Labels are 0/1.
struct ClassificationRecord {
  int y_true = 0;
  int y_pred = 0;
  std::string group;

  friend bool operator==(const ClassificationRecord&, const ClassificationRecord&) = default;
};

std::vector<ClassificationRecord> read_classification_records(
    const std::filesystem::path& path);

struct GroupConfusion {
  std::string group;
  long long tp = 0;
  long long fp = 0;
  long long tn = 0;
  long long fn = 0;

  long long total() const { return tp + fp + tn + fn; }

  friend bool operator==(const GroupConfusion&, const GroupConfusion&) = default;
};

// Confusion counts per group, sorted by group name.
std::vector<GroupConfusion> confusion_by_group(
    std::span<const ClassificationRecord> records);

// Which per-group rate feeds the disparity:
//   prevalence  (tp + fp) / total      predicted-positive share
//   fnr         fn / (fn + tp)         miss rate among true positives
//   fpr         fp / (fp + tn)         false alarms among true negatives
enum class RateKind { prevalence, fnr, fpr };

// difference: worst (largest) absolute gap over group pairs.
// ratio:      worst (smallest) min/max over group pairs; a pair with
//             both rates zero counts as 1.0, exactly one zero as 0.0.
enum class DisparityMode { difference, ratio };

// Groups whose rate denominator is zero are excluded (listed in
// details.excluded_groups); the result is absent when fewer than two
// groups have defined rates.
MetricResult disparity(RateKind kind, std::span<const GroupConfusion> groups,
                       DisparityMode mode);

// All six combinations in a fixed order.
std::vector<MetricResult> classification_disparities(
    std::span<const GroupConfusion> groups);

}  // namespace fairaudit
