#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "newsgraph/infer/provider.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "newsgraph/errors.hpp"
#include "newsgraph/ingest/headlines.hpp"
#include "newsgraph/log.hpp"
#include "newsgraph/sha256.hpp"

namespace newsgraph::infer {

namespace {

using json = nlohmann::ordered_json;

std::atomic<std::uint64_t> g_provider_calls{0};

std::string env_or_throw(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0')
    throw ConfigError(std::string("environment variable ") + name + " is not set");
  return v;
}

std::string utc_now_rfc3339() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string_view to_string(ProviderMode m) {
  switch (m) {
    case ProviderMode::Live: return "live";
    case ProviderMode::Replay: return "replay";
    case ProviderMode::Mock: return "mock";
  }
  throw std::logic_error("bad ProviderMode");
}

ProviderMode provider_mode_from_string(std::string_view s) {
  if (s == "live") return ProviderMode::Live;
  if (s == "replay") return ProviderMode::Replay;
  if (s == "mock") return ProviderMode::Mock;
  throw ConfigError("unknown provider mode \"" + std::string(s) +
                    "\" (expected live, replay, or mock)");
}

MockProvider::MockProvider(std::uint64_t seed) : seed_(seed) {}

std::string MockProvider::id() const { return "mock:" + std::to_string(seed_); }

std::string MockProvider::complete(const std::string& prompt) {
  // Pull the target list and the headline block back out of the prompt.
  static const std::string kTarget = "Target List: ";
  static const std::string kNews = "\nNews Headlines: ";
  auto tpos = prompt.find(kTarget);
  auto npos = prompt.find(kNews, tpos == std::string::npos ? 0 : tpos);
  if (tpos == std::string::npos || npos == std::string::npos || npos < tpos)
    throw ProviderError("mock provider: prompt lacks target list / headline sections");
  std::string target_line = prompt.substr(tpos + kTarget.size(), npos - tpos - kTarget.size());
  std::string headlines = prompt.substr(npos + kNews.size());

  std::vector<Ticker> targets;
  std::size_t start = 0;
  while (start <= target_line.size()) {
    auto comma = target_line.find(',', start);
    std::string tok = target_line.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == ' ') tok.pop_back();
    if (!tok.empty()) targets.emplace_back(tok);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }

  json companies = json::object();
  for (const auto& t : targets) {
    if (!ingest::mentions_company(headlines, t, "", ingest::MatchMode::TickerToken)) continue;
    std::string digest = sha256_hex(std::to_string(seed_) + "\n" + prompt + "\n" + t.str());
    int pick = (digest[0] % 16 + (digest[1] % 16) * 16) % 3;
    const char* sentiment = pick == 0 ? "positive" : pick == 1 ? "negative" : "neutral";
    companies[t.str()] = sentiment;
  }
  json out;
  out["Affected Companies"] = std::move(companies);
  return out.dump();
}

LiveConfig LiveConfig::from_env() {
  LiveConfig cfg;
  cfg.base_url = env_or_throw("NEWSGRAPH_LLM_BASE_URL");
  cfg.model = env_or_throw("NEWSGRAPH_LLM_MODEL");
  cfg.api_key = env_or_throw("NEWSGRAPH_LLM_API_KEY");
  return cfg;
}

LiveProvider::LiveProvider(LiveConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.base_url.empty() || cfg_.model.empty() || cfg_.api_key.empty())
    throw ConfigError("live provider requires base_url, model, and api_key");
  if (cfg_.max_retries < 0) throw ConfigError("max_retries must be >= 0");
}

std::string LiveProvider::id() const { return "live:" + cfg_.model; }

std::string LiveProvider::complete(const std::string& prompt) {
  json body;
  body["model"] = cfg_.model;
  body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});
  body["temperature"] = cfg_.temperature;
  const std::string payload = body.dump();

  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(250 << (attempt - 1)));
    httplib::Client cli(cfg_.base_url);
    cli.set_connection_timeout(cfg_.timeout_seconds, 0);
    cli.set_read_timeout(cfg_.timeout_seconds, 0);
    cli.set_bearer_token_auth(cfg_.api_key);
    auto res = cli.Post(cfg_.path, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      log::warn("provider attempt " + std::to_string(attempt + 1) + " failed: " + last_error);
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      last_error = "HTTP " + std::to_string(res->status);
      log::warn("provider attempt " + std::to_string(attempt + 1) + " failed: " + last_error);
      continue;
    }
    if (res->status != 200)
      throw ProviderError("provider returned HTTP " + std::to_string(res->status) + ": " +
                          res->body);
    try {
      json parsed = json::parse(res->body);
      return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw ProviderError("malformed completion payload: " + std::string(e.what()));
    }
  }
  throw ProviderError("provider unreachable after " + std::to_string(cfg_.max_retries + 1) +
                      " attempts (" + last_error + ")");
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string ResponseCache::key_for(const std::string& provider_id, const std::string& prompt_text) {
  return sha256_hex(provider_id + "\n" + prompt_text);
}

std::optional<std::string> ResponseCache::lookup(const std::string& provider_id,
                                                 const std::string& prompt_text) const {
  auto path = dir_ / (key_for(provider_id, prompt_text) + ".json");
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  json j;
  try {
    in >> j;
    std::string stored_hash = j.at("prompt_sha256").get<std::string>();
    if (stored_hash != sha256_hex(prompt_text))
      throw DataError("cache entry " + path.string() + " does not match its prompt hash");
    return j.at("raw_response").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError("corrupt cache entry " + path.string() + ": " + e.what());
  }
}

void ResponseCache::store(const std::string& provider_id, const std::string& prompt_text,
                          const std::string& raw_response) {
  std::lock_guard<std::mutex> lock(mu_);
  json j;
  j["prompt_sha256"] = sha256_hex(prompt_text);
  j["raw_response"] = raw_response;
  j["provider"] = provider_id;
  j["retrieved_at"] = utc_now_rfc3339();

  auto key = key_for(provider_id, prompt_text);
  auto tmp = dir_ / (key + ".json.tmp");
  auto final_path = dir_ / (key + ".json");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write cache entry: " + tmp.string());
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, final_path);
}

ProviderHandle make_provider(ProviderMode mode, std::uint64_t mock_seed,
                             std::string replay_provider_id) {
  ProviderHandle h;
  h.mode = mode;
  switch (mode) {
    case ProviderMode::Mock:
      h.impl = std::make_unique<MockProvider>(mock_seed);
      h.id = h.impl->id();
      break;
    case ProviderMode::Live: {
      h.impl = std::make_unique<LiveProvider>(LiveConfig::from_env());
      h.id = h.impl->id();
      break;
    }
    case ProviderMode::Replay:
      h.id = replay_provider_id.empty() ? MockProvider(mock_seed).id()
                                        : std::move(replay_provider_id);
      break;
  }
  return h;
}

AffectedSet query_provider(const PromptRequest& req, ProviderHandle& provider,
                           ResponseCache& cache, const NameTable& names) {
  std::optional<std::string> raw = cache.lookup(provider.id, req.prompt_text);
  if (!raw) {
    if (provider.mode == ProviderMode::Replay)
      throw CacheMissError("replay cache has no entry for prompt of " + req.date.to_string() +
                           " (key " + ResponseCache::key_for(provider.id, req.prompt_text) + ")");
    g_provider_calls.fetch_add(1, std::memory_order_relaxed);
    raw = provider.impl->complete(req.prompt_text);
    cache.store(provider.id, req.prompt_text, *raw);
  }
  AffectedSet out;
  out.date = req.date;
  out.raw_response = *raw;
  out.entries = parse_affected(*raw, req.universe, names);
  return out;
}

std::vector<AffectedSet> query_all(const std::vector<PromptRequest>& reqs,
                                   ProviderHandle& provider, ResponseCache& cache,
                                   int parallelism, const NameTable& names) {
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
  std::vector<AffectedSet> out(reqs.size());
  if (reqs.empty()) return out;

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= reqs.size()) return;
      try {
        out[i] = query_provider(reqs[i], provider, cache, names);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(parallelism), reqs.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

std::uint64_t provider_call_count() { return g_provider_calls.load(); }
void reset_provider_call_count() { g_provider_calls.store(0); }

}  // namespace newsgraph::infer
