#include "fairaudit/metrics/classification.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "fairaudit/dataset_io.hpp"
#include "fairaudit/error.hpp"

namespace fairaudit {
namespace {

std::string rate_name(RateKind kind) {
  switch (kind) {
    case RateKind::prevalence:
      return "prevalence";
    case RateKind::fnr:
      return "fnr";
    case RateKind::fpr:
      return "fpr";
  }
  return "?";
}

std::string mode_name(DisparityMode mode) {
  return mode == DisparityMode::difference ? "difference" : "ratio";
}

// Rate and whether its denominator is positive.
std::pair<double, bool> group_rate(RateKind kind, const GroupConfusion& g) {
  long long numerator = 0;
  long long denominator = 0;
  switch (kind) {
    case RateKind::prevalence:
      numerator = g.tp + g.fp;
      denominator = g.total();
      break;
    case RateKind::fnr:
      numerator = g.fn;
      denominator = g.fn + g.tp;
      break;
    case RateKind::fpr:
      numerator = g.fp;
      denominator = g.fp + g.tn;
      break;
  }
  if (denominator <= 0) return {0.0, false};
  return {static_cast<double>(numerator) / static_cast<double>(denominator), true};
}

int read_label(const nlohmann::json& j, const char* field,
               const std::string& at) {
  if (!j.contains(field) || !j.at(field).is_number_integer()) {
    throw IoError(std::string("missing or non-integer '") + field + "' at " + at);
  }
  const auto v = j.at(field).get<long long>();
  if (v != 0 && v != 1) {
    throw IoError(std::string("'") + field + "' must be 0 or 1 at " + at);
  }
  return static_cast<int>(v);
}

}  // namespace

std::vector<ClassificationRecord> read_classification_records(
    const std::filesystem::path& path) {
  std::vector<ClassificationRecord> records;
  for_each_jsonl_object(path, [&](std::size_t line, const nlohmann::json& j) {
    const std::string at = path.string() + ":" + std::to_string(line);
    ClassificationRecord rec;
    rec.y_true = read_label(j, "y_true", at);
    rec.y_pred = read_label(j, "y_pred", at);
    if (!j.contains("group") || !j.at("group").is_string() ||
        j.at("group").get<std::string>().empty()) {
      throw IoError("missing or empty 'group' at " + at);
    }
    rec.group = j.at("group").get<std::string>();
    records.push_back(std::move(rec));
  });
  if (records.empty()) {
    throw IoError("no classification records in " + path.string());
  }
  return records;
}

std::vector<GroupConfusion> confusion_by_group(
    std::span<const ClassificationRecord> records) {
  std::map<std::string, GroupConfusion> by_group;
  for (const auto& rec : records) {
    auto& g = by_group[rec.group];
    g.group = rec.group;
    if (rec.y_true == 1) {
      (rec.y_pred == 1 ? g.tp : g.fn) += 1;
    } else {
      (rec.y_pred == 1 ? g.fp : g.tn) += 1;
    }
  }
  std::vector<GroupConfusion> out;
  out.reserve(by_group.size());
  for (auto& [name, g] : by_group) out.push_back(std::move(g));
  return out;
}

MetricResult disparity(RateKind kind, std::span<const GroupConfusion> groups,
                       DisparityMode mode) {
  const std::string name = rate_name(kind) + "_" + mode_name(mode);
  std::map<std::string, double> rates;
  std::vector<std::string> excluded;
  for (const auto& g : groups) {
    const auto [rate, defined] = group_rate(kind, g);
    if (defined) {
      rates[g.group] = rate;
    } else {
      excluded.push_back(g.group);
    }
  }
  std::sort(excluded.begin(), excluded.end());
  if (rates.size() < 2) {
    return MetricResult::absent(
        name, "fewer than two groups have a defined " + rate_name(kind) +
                  " rate");
  }

  nlohmann::json per_pair = nlohmann::json::object();
  bool first = true;
  double worst = 0.0;
  for (auto it_a = rates.begin(); it_a != rates.end(); ++it_a) {
    for (auto it_b = std::next(it_a); it_b != rates.end(); ++it_b) {
      const double ra = it_a->second;
      const double rb = it_b->second;
      double v;
      if (mode == DisparityMode::difference) {
        v = std::abs(ra - rb);
      } else if (ra == 0.0 && rb == 0.0) {
        v = 1.0;
      } else if (ra == 0.0 || rb == 0.0) {
        v = 0.0;
      } else {
        v = std::min(ra, rb) / std::max(ra, rb);
      }
      per_pair[it_a->first + "|" + it_b->first] = v;
      if (first) {
        worst = v;
        first = false;
      } else {
        worst = (mode == DisparityMode::difference) ? std::max(worst, v)
                                                    : std::min(worst, v);
      }
    }
  }

  nlohmann::json details;
  details["rates"] = rates;
  details["pairs"] = per_pair;
  details["excluded_groups"] = excluded;
  return MetricResult::of(name, worst, static_cast<long long>(rates.size()),
                          details);
}

std::vector<MetricResult> classification_disparities(
    std::span<const GroupConfusion> groups) {
  std::vector<MetricResult> out;
  for (const auto kind : {RateKind::prevalence, RateKind::fnr, RateKind::fpr}) {
    for (const auto mode : {DisparityMode::difference, DisparityMode::ratio}) {
      out.push_back(disparity(kind, groups, mode));
    }
  }
  return out;
}

}  // namespace fairaudit
