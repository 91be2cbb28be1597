#include "fairaudit/report.hpp"

#include <cstdio>

#include "fairaudit/error.hpp"

namespace fairaudit {
namespace {

nlohmann::json ftu_report_to_json(const FtuReport& ftu) {
  nlohmann::json j;
  j["attribute"] = ftu.attribute;
  j["groups"] = ftu.groups;
  j["per_prompt"] = ftu.per_prompt;
  j["total_matches"] = ftu.total_matches;
  j["satisfied"] = ftu.satisfied;
  return j;
}

FtuReport ftu_report_from_json(const nlohmann::json& j) {
  FtuReport ftu;
  ftu.attribute = j.at("attribute").get<std::string>();
  ftu.groups = j.at("groups").get<std::vector<std::string>>();
  ftu.per_prompt =
      j.at("per_prompt")
          .get<std::map<std::string, std::map<std::string, long long>>>();
  ftu.total_matches = j.at("total_matches").get<long long>();
  ftu.satisfied = j.at("satisfied").get<bool>();
  return ftu;
}

nlohmann::json family_to_json(const MetricFamily& family) {
  nlohmann::json j;
  auto results = nlohmann::json::array();
  for (const auto& r : family.results) results.push_back(metric_result_to_json(r));
  j["results"] = std::move(results);
  if (!family.absent_reason.empty()) j["absent_reason"] = family.absent_reason;
  return j;
}

MetricFamily family_from_json(const nlohmann::json& j) {
  MetricFamily family;
  for (const auto& r : j.at("results")) {
    family.results.push_back(metric_result_from_json(r));
  }
  family.absent_reason = j.value("absent_reason", "");
  return family;
}

// One "| a | b | c |" row.
std::string table_row(const std::vector<std::string>& cells) {
  std::string row = "|";
  for (const auto& c : cells) {
    row += " " + c + " |";
  }
  row += "\n";
  return row;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

void render_results_table(std::string& out,
                          const std::vector<MetricResult>& results) {
  out += table_row({"metric", "value", "support"});
  out += table_row({"---", "---:", "---:"});
  for (const auto& r : results) {
    out += table_row({r.name, r.value ? format_value(*r.value) : "absent",
                      std::to_string(r.support)});
  }
  bool any_absent = false;
  for (const auto& r : results) {
    if (!r.value) {
      out += "\n";
      out += "_" + r.name + " not computed: " + r.absent_reason + "_\n";
      any_absent = true;
    }
  }
  if (any_absent) out += "\n";
}

void render_family(std::string& out, const std::string& title,
                   const MetricFamily& family) {
  out += "## " + title + "\n\n";
  if (!family.present()) {
    out += "_Not computed: " + family.absent_reason + "_\n\n";
    return;
  }
  render_results_table(out, family.results);
  out += "\n";
}

}  // namespace

nlohmann::json report_to_json(const AutoEvalReport& report) {
  nlohmann::json j;

  nlohmann::json ftu;
  ftu["checked"] = report.ftu.checked;
  ftu["satisfied"] = report.ftu.satisfied;
  ftu["total_matches"] = report.ftu.total_matches;
  auto attributes = nlohmann::json::array();
  for (const auto& a : report.ftu.attributes) {
    attributes.push_back(ftu_report_to_json(a));
  }
  ftu["attributes"] = std::move(attributes);
  j["ftu"] = std::move(ftu);

  j["toxicity"] = family_to_json(report.toxicity);
  j["stereotype"] = family_to_json(report.stereotype);

  nlohmann::json cf;
  auto comparisons = nlohmann::json::array();
  for (const auto& cmp : report.counterfactual.comparisons) {
    nlohmann::json c;
    c["attribute"] = cmp.attribute;
    c["group_a"] = cmp.group_a;
    c["group_b"] = cmp.group_b;
    auto results = nlohmann::json::array();
    for (const auto& r : cmp.results) results.push_back(metric_result_to_json(r));
    c["results"] = std::move(results);
    comparisons.push_back(std::move(c));
  }
  cf["comparisons"] = std::move(comparisons);
  if (!report.counterfactual.present()) {
    cf["absent_reason"] = report.counterfactual.absent_reason;
  }
  j["counterfactual"] = std::move(cf);

  j["metadata"] = report.metadata;
  return j;
}

AutoEvalReport report_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw IoError("report JSON must be an object");
  AutoEvalReport report;
  try {
    const auto& ftu = j.at("ftu");
    report.ftu.checked = ftu.at("checked").get<bool>();
    report.ftu.satisfied = ftu.at("satisfied").get<bool>();
    report.ftu.total_matches = ftu.at("total_matches").get<long long>();
    for (const auto& a : ftu.at("attributes")) {
      report.ftu.attributes.push_back(ftu_report_from_json(a));
    }

    report.toxicity = family_from_json(j.at("toxicity"));
    report.stereotype = family_from_json(j.at("stereotype"));

    const auto& cf = j.at("counterfactual");
    for (const auto& c : cf.at("comparisons")) {
      CounterfactualComparison cmp;
      cmp.attribute = c.at("attribute").get<std::string>();
      cmp.group_a = c.at("group_a").get<std::string>();
      cmp.group_b = c.at("group_b").get<std::string>();
      for (const auto& r : c.at("results")) {
        cmp.results.push_back(metric_result_from_json(r));
      }
      report.counterfactual.comparisons.push_back(std::move(cmp));
    }
    report.counterfactual.absent_reason = cf.value("absent_reason", "");

    report.metadata = j.at("metadata");
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed report JSON: ") + e.what());
  }
  return report;
}

std::string render_json(const AutoEvalReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

std::string render_markdown(const AutoEvalReport& report) {
  std::string out = "# Fairness audit report\n\n";

  out += "## Fairness through unawareness\n\n";
  if (!report.ftu.checked) {
    out += "_Prompts were not checked for attribute words._\n\n";
  } else {
    out += std::string("- satisfied: ") +
           (report.ftu.satisfied ? "yes" : "no") + "\n";
    out += "- attribute word matches: " +
           std::to_string(report.ftu.total_matches) + "\n\n";
    if (!report.ftu.attributes.empty()) {
      out += table_row({"attribute", "matches", "satisfied"});
      out += table_row({"---", "---:", "---"});
      for (const auto& a : report.ftu.attributes) {
        out += table_row({a.attribute, std::to_string(a.total_matches),
                          a.satisfied ? "yes" : "no"});
      }
      out += "\n";
    }
  }

  render_family(out, "Toxicity", report.toxicity);
  render_family(out, "Stereotype", report.stereotype);

  out += "## Counterfactual\n\n";
  if (!report.counterfactual.present()) {
    out += "_Not computed: " + report.counterfactual.absent_reason + "_\n\n";
  } else {
    for (const auto& cmp : report.counterfactual.comparisons) {
      out += "### " + cmp.attribute + ": " + cmp.group_a + " vs " + cmp.group_b +
             "\n\n";
      render_results_table(out, cmp.results);
      out += "\n";
    }
  }

  out += "## Configuration\n\n";
  out += "```json\n";
  out += report.metadata.dump(2);
  out += "\n```\n";
  return out;
}

}  // namespace fairaudit
