#include "fairaudit/llm_client.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "fairaudit/error.hpp"
#include "http_endpoint.hpp"

namespace fairaudit {
namespace {

struct GenTask {
  std::string prompt_id;
  std::optional<std::string> group;
  std::string text;
  std::size_t slot_begin = 0;  // m consecutive output slots
};

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

void sleep_with_jitter(double base_s, int attempt, std::mt19937& rng) {
  const double cap = base_s * std::pow(2.0, attempt - 1);
  const double delay = std::uniform_real_distribution<double>(0.0, cap)(rng);
  std::this_thread::sleep_for(std::chrono::duration<double>(delay));
}

enum class CallOutcome { ok, retryable, permanent };

struct CallResult {
  CallOutcome outcome = CallOutcome::permanent;
  std::vector<std::string> texts;
};

// One POST to /chat/completions. `n` is included only when include_n.
CallResult post_chat(httplib::Client& cli, const std::string& path,
                     const httplib::Headers& headers,
                     const GenerationConfig& cfg, const std::string& user_text,
                     bool include_n) {
  nlohmann::json body;
  body["model"] = cfg.model;
  body["temperature"] = cfg.temperature;
  auto messages = nlohmann::json::array();
  if (cfg.system_prompt) {
    messages.push_back({{"role", "system"}, {"content", *cfg.system_prompt}});
  }
  messages.push_back({{"role", "user"}, {"content", user_text}});
  body["messages"] = std::move(messages);
  if (include_n) body["n"] = cfg.m;

  auto res = cli.Post(path, headers, body.dump(), "application/json");
  CallResult out;
  if (!res) {
    out.outcome = CallOutcome::retryable;  // transport error
    return out;
  }
  if (res->status != 200) {
    out.outcome = retryable_status(res->status) ? CallOutcome::retryable
                                                : CallOutcome::permanent;
    return out;
  }
  nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("choices") ||
      !j.at("choices").is_array()) {
    out.outcome = CallOutcome::permanent;
    return out;
  }
  for (const auto& choice : j.at("choices")) {
    if (!choice.is_object() || !choice.contains("message") ||
        !choice.at("message").is_object() ||
        !choice.at("message").contains("content") ||
        !choice.at("message").at("content").is_string()) {
      out.outcome = CallOutcome::permanent;
      out.texts.clear();
      return out;
    }
    out.texts.push_back(choice.at("message").at("content").get<std::string>());
  }
  if (out.texts.empty()) {
    out.outcome = CallOutcome::permanent;
    return out;
  }
  out.outcome = CallOutcome::ok;
  return out;
}

struct AttemptedCall {
  CallResult result;
  int attempts = 0;
};

AttemptedCall call_with_retries(httplib::Client& cli, const std::string& path,
                                const httplib::Headers& headers,
                                const GenerationConfig& cfg,
                                const std::string& user_text, bool include_n,
                                std::mt19937& rng) {
  AttemptedCall out;
  while (true) {
    ++out.attempts;
    out.result = post_chat(cli, path, headers, cfg, user_text, include_n);
    if (out.result.outcome != CallOutcome::retryable) return out;
    if (out.attempts > cfg.max_retries) return out;
    sleep_with_jitter(cfg.backoff_base_s, out.attempts, rng);
  }
}

void fill_failure(std::vector<ResponseRecord>* records, const GenTask& task,
                  int first_slot, int count, int attempts) {
  for (int k = 0; k < count; ++k) {
    auto& r = (*records)[task.slot_begin + static_cast<std::size_t>(first_slot + k)];
    r.prompt_id = task.prompt_id;
    r.group = task.group;
    r.variant_text = task.text;
    r.response.clear();
    r.ok = false;
    r.attempt_count = attempts;
  }
}

void run_task(httplib::Client& cli, const std::string& path,
              const httplib::Headers& headers, const GenerationConfig& cfg,
              const GenTask& task, std::vector<ResponseRecord>* records,
              std::mt19937& rng) {
  auto fill_ok = [&](int slot, const std::string& text, int attempts) {
    auto& r = (*records)[task.slot_begin + static_cast<std::size_t>(slot)];
    r.prompt_id = task.prompt_id;
    r.group = task.group;
    r.variant_text = task.text;
    r.response = text;
    r.ok = true;
    r.attempt_count = attempts;
  };
  auto single = [&](int slot) {
    const auto call =
        call_with_retries(cli, path, headers, cfg, task.text, false, rng);
    if (call.result.outcome == CallOutcome::ok) {
      fill_ok(slot, call.result.texts.front(), call.attempts);
    } else {
      fill_failure(records, task, slot, 1, call.attempts);
    }
  };

  const auto batched =
      call_with_retries(cli, path, headers, cfg, task.text, true, rng);
  if (batched.result.outcome == CallOutcome::ok) {
    const int got = static_cast<int>(
        std::min<std::size_t>(batched.result.texts.size(),
                              static_cast<std::size_t>(cfg.m)));
    for (int k = 0; k < got; ++k) {
      fill_ok(k, batched.result.texts[static_cast<std::size_t>(k)],
              batched.attempts);
    }
    // Endpoint returned fewer choices than requested: top up one by one.
    for (int k = got; k < cfg.m; ++k) single(k);
    return;
  }
  if (batched.result.outcome == CallOutcome::permanent && cfg.m > 1) {
    // The endpoint may not support n; retry the whole task as singles.
    for (int k = 0; k < cfg.m; ++k) single(k);
    return;
  }
  fill_failure(records, task, 0, cfg.m, batched.attempts);
}

std::vector<ResponseRecord> run_generation(const std::vector<GenTask>& tasks,
                                           const GenerationConfig& cfg) {
  std::vector<ResponseRecord> records(tasks.size() *
                                      static_cast<std::size_t>(cfg.m));
  if (tasks.empty()) return records;

  const auto ep = detail::parse_http_endpoint(cfg.endpoint_url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (ep.https) {
    throw ConfigError("built without TLS support; use an http:// endpoint");
  }
#endif
  const std::string path = ep.prefix + "/chat/completions";

  httplib::Headers headers;
  if (!cfg.api_key_env.empty()) {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (key != nullptr) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }

  const std::size_t worker_count =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.concurrency),
                            tasks.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> worker_errors(worker_count);
  std::vector<std::thread> workers;
  workers.reserve(worker_count);
  for (std::size_t w = 0; w < worker_count; ++w) {
    workers.emplace_back([&, w] {
      try {
        httplib::Client cli(ep.base);
        const auto timeout =
            std::chrono::duration<double>(cfg.timeout_s);
        const auto sec =
            std::chrono::duration_cast<std::chrono::seconds>(timeout);
        const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(
            timeout - sec);
        cli.set_connection_timeout(sec.count(), usec.count());
        cli.set_read_timeout(sec.count(), usec.count());
        cli.set_write_timeout(sec.count(), usec.count());
        std::mt19937 rng(std::random_device{}() + static_cast<unsigned>(w));
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) break;
          run_task(cli, path, headers, cfg, tasks[i], &records, rng);
        }
      } catch (...) {
        worker_errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& e : worker_errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

}  // namespace

void validate_generation_config(const GenerationConfig& cfg) {
  detail::parse_http_endpoint(cfg.endpoint_url);
  if (cfg.model.empty()) throw ConfigError("model name is empty");
  if (cfg.m < 1) throw ConfigError("m must be >= 1");
  if (cfg.temperature < 0.0) throw ConfigError("temperature must be >= 0");
  if (cfg.concurrency < 1) throw ConfigError("concurrency must be >= 1");
  if (cfg.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (!(cfg.timeout_s > 0.0)) throw ConfigError("timeout_s must be > 0");
  if (!(cfg.backoff_base_s >= 0.0)) {
    throw ConfigError("backoff_base_s must be >= 0");
  }
  if (!cfg.api_key_env.empty() && std::getenv(cfg.api_key_env.c_str()) == nullptr) {
    throw ConfigError("environment variable " + cfg.api_key_env +
                          " is not set (set it, or pass an empty api_key_env to "
                          "skip auth)",
                      "E_CONFIG_API_KEY");
  }
}

std::vector<ResponseRecord> generate_responses(std::span<const PromptRecord> prompts,
                                               const GenerationConfig& cfg) {
  validate_generation_config(cfg);
  std::vector<std::size_t> order(prompts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return prompts[a].id < prompts[b].id;
  });
  std::vector<GenTask> tasks;
  tasks.reserve(prompts.size());
  std::set<std::string> seen;
  for (const std::size_t idx : order) {
    const auto& p = prompts[idx];
    if (!seen.insert(p.id).second) {
      throw ConfigError("duplicate prompt id \"" + p.id + "\"", "E_DUPLICATE_ID");
    }
    tasks.push_back(GenTask{p.id, std::nullopt, p.text,
                            tasks.size() * static_cast<std::size_t>(cfg.m)});
  }
  return run_generation(tasks, cfg);
}

std::vector<ResponseRecord> generate_counterfactual_responses(
    std::span<const CounterfactualSet> sets, const GenerationConfig& cfg) {
  validate_generation_config(cfg);
  std::vector<std::size_t> order(sets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sets[a].prompt_id < sets[b].prompt_id;
  });
  std::vector<GenTask> tasks;
  std::set<std::string> seen;
  for (const std::size_t idx : order) {
    const auto& set = sets[idx];
    if (!seen.insert(set.prompt_id).second) {
      throw ConfigError("duplicate prompt id \"" + set.prompt_id + "\"",
                        "E_DUPLICATE_ID");
    }
    if (set.variants.size() < 2) {
      throw ConfigError("counterfactual set \"" + set.prompt_id +
                        "\" needs at least two group variants");
    }
    for (const auto& [group, text] : set.variants) {
      tasks.push_back(GenTask{set.prompt_id, group, text,
                              tasks.size() * static_cast<std::size_t>(cfg.m)});
    }
  }
  return run_generation(tasks, cfg);
}

}  // namespace fairaudit
