#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairaudit/lexicon.hpp"
#include "fairaudit/records.hpp"

namespace fairaudit {

// Connection and sampling settings for a chat-completions endpoint.
// `api_key_env` names an environment variable holding the bearer token;
// leave it empty to send no Authorization header. Retries apply only to
// 429, 5xx and transport errors, with exponential backoff (factor 2 on
// `backoff_base_s`) and full jitter.
struct GenerationConfig {
  std::string endpoint_url;
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";
  int m = 25;                  // generations per prompt
  double temperature = 1.0;
  int concurrency = 10;        // max in-flight requests
  int max_retries = 3;
  double timeout_s = 60.0;
  std::optional<std::string> system_prompt;
  double backoff_base_s = 0.5;
};

// Raises ConfigError on bad URLs, out-of-range numbers, or a named but
// unset api key variable.
void validate_generation_config(const GenerationConfig& config);

// Generates m responses per prompt. Requests one completion batch per
// prompt (n = m) and falls back to sequential single-completion calls
// when the endpoint ignores or rejects n. Permanent failures yield
// records with ok = false and an empty response; the call itself only
// throws for configuration errors. Output is sorted by prompt id, then
// generation index.
std::vector<ResponseRecord> generate_responses(std::span<const PromptRecord> prompts,
                                               const GenerationConfig& config);

// Same contract for counterfactual variants: every (prompt, group)
// variant gets m generations, all groups sharing identical request
// parameters. Output is sorted by (prompt id, group, generation index).
std::vector<ResponseRecord> generate_counterfactual_responses(
    std::span<const CounterfactualSet> sets, const GenerationConfig& config);

}  // namespace fairaudit
