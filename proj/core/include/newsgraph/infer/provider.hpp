#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "newsgraph/infer/affected.hpp"
#include "newsgraph/infer/prompt.hpp"

namespace newsgraph::infer {

enum class ProviderMode { Live, Replay, Mock };

std::string_view to_string(ProviderMode m);
ProviderMode provider_mode_from_string(std::string_view s);  // throws ConfigError

// Raw-completion backend. id() feeds the cache key, so two providers with
// different ids never share cached responses.
class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  virtual std::string id() const = 0;
  virtual std::string complete(const std::string& prompt) = 0;
};

// Deterministic offline stand-in: affected companies are the target-list
// tickers that occur as whole tokens in the headline block, with sentiments
// drawn from a hash of (seed, prompt, ticker).
class MockProvider : public LlmProvider {
 public:
  explicit MockProvider(std::uint64_t seed = 7);
  std::string id() const override;
  std::string complete(const std::string& prompt) override;

 private:
  std::uint64_t seed_;
};

// Chat-completion endpoint settings. Secrets come from the environment only:
// NEWSGRAPH_LLM_BASE_URL, NEWSGRAPH_LLM_MODEL, NEWSGRAPH_LLM_API_KEY.
struct LiveConfig {
  std::string base_url;
  std::string model;
  std::string api_key;
  std::string path = "/v1/chat/completions";
  double temperature = 0.0;
  int timeout_seconds = 60;
  int max_retries = 3;

  static LiveConfig from_env();  // throws ConfigError when a variable is missing
};

class LiveProvider : public LlmProvider {
 public:
  explicit LiveProvider(LiveConfig cfg);
  std::string id() const override;
  std::string complete(const std::string& prompt) override;

 private:
  LiveConfig cfg_;
};

// One JSON file per request under dir, named by the request hash:
// sha256(provider_id + "\n" + prompt_text) + ".json".
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);  // creates dir if absent

  static std::string key_for(const std::string& provider_id, const std::string& prompt_text);

  std::optional<std::string> lookup(const std::string& provider_id,
                                    const std::string& prompt_text) const;
  void store(const std::string& provider_id, const std::string& prompt_text,
             const std::string& raw_response);
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

// Mode + cache identity + (for live/mock) the backend. Replay carries no
// backend at all, so it cannot reach the network even on a bug.
struct ProviderHandle {
  ProviderMode mode = ProviderMode::Mock;
  std::string id;
  std::unique_ptr<LlmProvider> impl;
};

// replay_provider_id names whose cached responses a replay run reads; it
// defaults to the mock id for the same seed.
ProviderHandle make_provider(ProviderMode mode, std::uint64_t mock_seed = 7,
                             std::string replay_provider_id = {});

// Cache-first single query. Replay + miss -> CacheMissError; live/mock miss
// calls the backend and stores the raw response before parsing.
AffectedSet query_provider(const PromptRequest& req, ProviderHandle& provider,
                           ResponseCache& cache, const NameTable& names = NameTable::dow30());

// Runs requests with bounded parallelism (provider backends must be
// thread-safe; the bundled ones are). Output order matches input order.
std::vector<AffectedSet> query_all(const std::vector<PromptRequest>& reqs,
                                   ProviderHandle& provider, ResponseCache& cache,
                                   int parallelism = 4,
                                   const NameTable& names = NameTable::dow30());

// Count of backend complete() calls since process start / last reset; lets
// tests assert the cache and replay contracts.
std::uint64_t provider_call_count();
void reset_provider_call_count();

}  // namespace newsgraph::infer
