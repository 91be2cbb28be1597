#include "fairaudit/records.hpp"

#include "fairaudit/error.hpp"

namespace fairaudit {

nlohmann::json metric_result_to_json(const MetricResult& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["support"] = r.support;
  j["details"] = r.details;
  if (r.value) {
    j["value"] = *r.value;
  } else {
    j["value"] = nullptr;
    j["absent_reason"] = r.absent_reason;
  }
  return j;
}

MetricResult metric_result_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw IoError("metric result must be an object");
  MetricResult r;
  if (!j.contains("name") || !j.at("name").is_string()) {
    throw IoError("metric result needs a string 'name'");
  }
  r.name = j.at("name").get<std::string>();
  if (j.contains("support")) {
    if (!j.at("support").is_number_integer()) {
      throw IoError("metric result 'support' must be an integer: " + r.name);
    }
    r.support = j.at("support").get<long long>();
  }
  if (j.contains("details")) r.details = j.at("details");
  if (j.contains("value") && !j.at("value").is_null()) {
    if (!j.at("value").is_number()) {
      throw IoError("metric result 'value' must be a number or null: " + r.name);
    }
    r.value = j.at("value").get<double>();
  } else {
    if (!j.contains("absent_reason") || !j.at("absent_reason").is_string()) {
      throw IoError("absent metric result needs an 'absent_reason': " + r.name);
    }
    r.absent_reason = j.at("absent_reason").get<std::string>();
  }
  return r;
}

}  // namespace fairaudit
