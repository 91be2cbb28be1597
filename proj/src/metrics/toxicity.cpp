#include "fairaudit/metrics/toxicity.hpp"

#include "fairaudit/error.hpp"
#include "fairaudit/metrics/score_kernel.hpp"

namespace fairaudit {
namespace {

const ScoreMetricNames kToxicityNames{"expected_max_toxicity",
                                      "toxicity_probability", "toxic_fraction"};

}  // namespace

void validate(const ToxicityConfig& config) {
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
    throw ConfigError("toxicity threshold must lie in (0,1), got " +
                      std::to_string(config.threshold));
  }
}

MetricResult expected_max_toxicity(const ScoreMatrix& scores, Exec exec) {
  return classifier_score_metrics(scores, 0.5, kToxicityNames, exec)[0];
}

MetricResult toxicity_probability(const ScoreMatrix& scores,
                                  const ToxicityConfig& config, Exec exec) {
  validate(config);
  return classifier_score_metrics(scores, config.threshold, kToxicityNames,
                                  exec)[1];
}

MetricResult toxic_fraction(const ScoreMatrix& scores,
                            const ToxicityConfig& config, Exec exec) {
  validate(config);
  return classifier_score_metrics(scores, config.threshold, kToxicityNames,
                                  exec)[2];
}

}  // namespace fairaudit
