#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <fairaudit/error.hpp>
#include <fairaudit/metrics/classification.hpp>

#include "support/oracles.hpp"

using namespace fairaudit;
namespace fs = std::filesystem;

namespace {

std::vector<ClassificationRecord> worked_example() {
  // y_true = [1,0,1,0], y_pred = [1,1,0,0], groups = [a,a,b,b]
  return {{1, 1, "a"}, {0, 1, "a"}, {1, 0, "b"}, {0, 0, "b"}};
}

const MetricResult& find_metric(const std::vector<MetricResult>& results,
                                const std::string& name) {
  for (const auto& r : results)
    if (r.name == name) return r;
  FAIL("metric not found: " << name);
  static MetricResult dummy;
  return dummy;
}

}  // namespace

TEST_CASE("confusion counts per group") {
  const auto confusions = confusion_by_group(worked_example());
  REQUIRE(confusions.size() == 2);
  CHECK(confusions[0].group == "a");
  CHECK(confusions[0].tp == 1);
  CHECK(confusions[0].fp == 1);
  CHECK(confusions[0].tn == 0);
  CHECK(confusions[0].fn == 0);
  CHECK(confusions[1].group == "b");
  CHECK(confusions[1].fn == 1);
  CHECK(confusions[1].tn == 1);
  CHECK(confusions[1].total() == 2);
  SUBCASE("single record") {
    const auto one = confusion_by_group(
        std::vector<ClassificationRecord>{{1, 1, "a"}});
    REQUIRE(one.size() == 1);
    CHECK(one[0].tp == 1);
    CHECK(one[0].total() == 1);
  }
}

TEST_CASE("worked disparity example") {
  const auto confusions = confusion_by_group(worked_example());
  CHECK(*disparity(RateKind::prevalence, confusions, DisparityMode::difference)
             .value == 1.0);
  CHECK(*disparity(RateKind::prevalence, confusions, DisparityMode::ratio)
             .value == 0.0);
  CHECK(*disparity(RateKind::fnr, confusions, DisparityMode::difference)
             .value == 1.0);
  SUBCASE("rates land in the details") {
    const auto r =
        disparity(RateKind::prevalence, confusions, DisparityMode::difference);
    CHECK(r.details.at("rates").at("a") == 1.0);
    CHECK(r.details.at("rates").at("b") == 0.0);
    CHECK(r.support == 2);
  }
}

TEST_CASE("identical groups show no disparity") {
  std::vector<ClassificationRecord> records{
      {1, 1, "a"}, {0, 0, "a"}, {1, 1, "b"}, {0, 0, "b"}};
  const auto confusions = confusion_by_group(records);
  CHECK(*disparity(RateKind::prevalence, confusions, DisparityMode::difference)
             .value == 0.0);
  CHECK(*disparity(RateKind::prevalence, confusions, DisparityMode::ratio)
             .value == 1.0);
}

TEST_CASE("zero-zero rates count as ratio one, single zero as zero") {
  // Both groups predict nothing positive: prevalence 0 and 0.
  std::vector<ClassificationRecord> both_zero{{1, 0, "a"}, {1, 0, "b"}};
  const auto c1 = confusion_by_group(both_zero);
  CHECK(*disparity(RateKind::prevalence, c1, DisparityMode::ratio).value == 1.0);
  std::vector<ClassificationRecord> one_zero{{1, 1, "a"}, {1, 0, "b"}};
  const auto c2 = confusion_by_group(one_zero);
  CHECK(*disparity(RateKind::prevalence, c2, DisparityMode::ratio).value == 0.0);
}

TEST_CASE("undefined rates exclude the group") {
  // Group b has no true positives or false negatives, so FNR is undefined.
  std::vector<ClassificationRecord> records{
      {1, 1, "a"}, {1, 0, "a"}, {0, 0, "b"}, {0, 1, "b"},
      {1, 1, "c"}, {1, 1, "c"}};
  const auto confusions = confusion_by_group(records);
  const auto r = disparity(RateKind::fnr, confusions, DisparityMode::difference);
  REQUIRE(r.value.has_value());
  CHECK(*r.value == 0.5);  // a: 1/2, c: 0
  CHECK(r.support == 2);
  const auto excluded = r.details.at("excluded_groups");
  REQUIRE(excluded.size() == 1);
  CHECK(excluded[0] == "b");
  SUBCASE("fewer than two defined rates leaves the metric absent") {
    std::vector<ClassificationRecord> thin{{1, 1, "a"}, {0, 0, "b"}};
    const auto absent =
        disparity(RateKind::fnr, confusion_by_group(thin), DisparityMode::ratio);
    CHECK_FALSE(absent.value.has_value());
    CHECK_FALSE(absent.absent_reason.empty());
  }
}

TEST_CASE("worst pair wins with three groups") {
  // Prevalences: a = 1, b = 0.5, c = 0.
  std::vector<ClassificationRecord> records{
      {0, 1, "a"}, {0, 1, "a"}, {0, 1, "b"}, {0, 0, "b"}, {0, 0, "c"},
      {0, 0, "c"}};
  const auto confusions = confusion_by_group(records);
  CHECK(*disparity(RateKind::prevalence, confusions, DisparityMode::difference)
             .value == 1.0);
  CHECK(*disparity(RateKind::prevalence, confusions, DisparityMode::ratio)
             .value == 0.0);
  const auto pairs = disparity(RateKind::prevalence, confusions,
                               DisparityMode::difference)
                         .details.at("pairs");
  CHECK(pairs.size() == 3);
  CHECK(pairs.at("a|c") == 1.0);
}

TEST_CASE("the six standard disparities come out in fixed order") {
  const auto results = classification_disparities(confusion_by_group(worked_example()));
  REQUIRE(results.size() == 6);
  CHECK(results[0].name == "prevalence_difference");
  CHECK(results[1].name == "prevalence_ratio");
  CHECK(results[2].name == "fnr_difference");
  CHECK(results[3].name == "fnr_ratio");
  CHECK(results[4].name == "fpr_difference");
  CHECK(results[5].name == "fpr_ratio");
}

TEST_CASE("record order never changes the results") {
  auto records = worked_example();
  const auto baseline = classification_disparities(confusion_by_group(records));
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(records.begin(), records.end(), rng);
    CHECK(classification_disparities(confusion_by_group(records)) == baseline);
  }
}

TEST_CASE("random datasets match the brute-force oracle") {
  std::mt19937 rng(321);
  std::uniform_int_distribution<int> label(0, 1);
  std::uniform_int_distribution<int> group(0, 2);
  std::uniform_int_distribution<int> size(2, 50);
  const std::vector<std::string> names{"a", "b", "c"};
  const std::vector<std::pair<RateKind, std::string>> kinds{
      {RateKind::prevalence, "prevalence"},
      {RateKind::fnr, "fnr"},
      {RateKind::fpr, "fpr"}};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<ClassificationRecord> records;
    std::vector<oracle::LabeledRecord> mirror;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      const int yt = label(rng), yp = label(rng);
      const auto& g = names[group(rng)];
      records.push_back({yt, yp, g});
      mirror.push_back({yt, yp, g});
    }
    const auto confusions = confusion_by_group(records);
    for (const auto& [kind, kind_name] : kinds) {
      const auto want = oracle::worst_disparity(oracle::group_rates(mirror, kind_name));
      const auto diff = disparity(kind, confusions, DisparityMode::difference);
      const auto ratio = disparity(kind, confusions, DisparityMode::ratio);
      REQUIRE(diff.value.has_value() == want.difference.has_value());
      if (want.difference) {
        CHECK(*diff.value == doctest::Approx(*want.difference).epsilon(1e-12));
        CHECK(*ratio.value == doctest::Approx(*want.ratio).epsilon(1e-12));
        CHECK(*diff.value >= 0.0);
        CHECK(*diff.value <= 1.0);
        CHECK(*ratio.value >= 0.0);
        CHECK(*ratio.value <= 1.0);
      }
    }
  }
}

TEST_CASE("classification file reader") {
  const auto path = fs::temp_directory_path() / "fa_cls.jsonl";
  {
    std::ofstream out(path);
    out << R"({"y_true":1,"y_pred":1,"group":"a"})" << "\n"
        << R"({"y_true":0,"y_pred":1,"group":"b"})" << "\n";
  }
  const auto records = read_classification_records(path);
  REQUIRE(records.size() == 2);
  CHECK(records[0] == ClassificationRecord{1, 1, "a"});
  CHECK(records[1] == ClassificationRecord{0, 1, "b"});
  fs::remove(path);

  SUBCASE("bad label") {
    std::ofstream out(path);
    out << R"({"y_true":2,"y_pred":1,"group":"a"})" << "\n";
    out.close();
    CHECK_THROWS_AS(read_classification_records(path), IoError);
    fs::remove(path);
  }
  SUBCASE("non-integer label") {
    std::ofstream out(path);
    out << R"({"y_true":0.5,"y_pred":1,"group":"a"})" << "\n";
    out.close();
    CHECK_THROWS_AS(read_classification_records(path), IoError);
    fs::remove(path);
  }
  SUBCASE("empty group") {
    std::ofstream out(path);
    out << R"({"y_true":1,"y_pred":1,"group":""})" << "\n";
    out.close();
    CHECK_THROWS_AS(read_classification_records(path), IoError);
    fs::remove(path);
  }
  SUBCASE("empty file") {
    std::ofstream out(path);
    out.close();
    CHECK_THROWS_AS(read_classification_records(path), IoError);
    fs::remove(path);
  }
}
