#include "newsgraph/pipeline/run_config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "newsgraph/errors.hpp"

namespace newsgraph::pipeline {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (allowed.count(key) == 0)
      throw ConfigError("unknown config key \"" + key + "\" in " + where);
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute()) return path.lexically_normal();
  return (base / path).lexically_normal();
}

}  // namespace

void RunConfig::validate() const {
  if (universe.empty()) throw ConfigError("universe must not be empty");
  std::set<Ticker> seen;
  for (const auto& t : universe)
    if (!seen.insert(t).second) throw ConfigError("duplicate universe ticker " + t.str());
  if (market_csv.empty() || headlines_jsonl.empty() || cache_dir.empty() || output_dir.empty())
    throw ConfigError("market_csv, headlines, cache_dir, and output_dir are all required");
  if (provider_parallelism < 1) throw ConfigError("provider parallelism must be >= 1");
  if (headlines_per_prompt < 1) throw ConfigError("headlines_per_prompt must be >= 1");
  model.validate();
  if (!backtest_long_only && !backtest_long_short)
    throw ConfigError("at least one backtest strategy must be enabled");
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }

  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  RunConfig cfg;
  try {
    reject_unknown_keys(j, {"market_csv", "headlines", "cache_dir", "output_dir", "universe",
                            "split_date", "provider", "model", "backtest"},
                        "config root");
    cfg.market_csv = resolve(base, j.at("market_csv").get<std::string>());
    cfg.headlines_jsonl = resolve(base, j.at("headlines").get<std::string>());
    cfg.cache_dir = resolve(base, j.at("cache_dir").get<std::string>());
    cfg.output_dir = resolve(base, j.at("output_dir").get<std::string>());
    for (const auto& s : j.at("universe")) cfg.universe.emplace_back(s.get<std::string>());
    cfg.split_date = Date::parse(j.at("split_date").get<std::string>());

    if (j.contains("provider")) {
      const json& p = j["provider"];
      reject_unknown_keys(
          p, {"mode", "mock_seed", "replay_provider_id", "parallelism", "headlines_per_prompt"},
          "provider");
      if (p.contains("mode"))
        cfg.provider_mode = infer::provider_mode_from_string(p["mode"].get<std::string>());
      if (p.contains("mock_seed")) cfg.mock_seed = p["mock_seed"].get<std::uint64_t>();
      if (p.contains("replay_provider_id"))
        cfg.replay_provider_id = p["replay_provider_id"].get<std::string>();
      if (p.contains("parallelism")) cfg.provider_parallelism = p["parallelism"].get<int>();
      if (p.contains("headlines_per_prompt"))
        cfg.headlines_per_prompt = p["headlines_per_prompt"].get<int>();
    }
    if (j.contains("model")) cfg.model = model::ModelConfig::from_json(j["model"].dump());
    if (j.contains("backtest")) {
      const json& b = j["backtest"];
      reject_unknown_keys(b, {"long_only", "long_short", "include_ablation"}, "backtest");
      if (b.contains("long_only")) cfg.backtest_long_only = b["long_only"].get<bool>();
      if (b.contains("long_short")) cfg.backtest_long_short = b["long_short"].get<bool>();
      if (b.contains("include_ablation"))
        cfg.include_ablation = b["include_ablation"].get<bool>();
    }
  } catch (const json::exception& e) {
    throw ConfigError("bad config " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("bad config " + path.string() + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

void save_run_config(const std::filesystem::path& path, const RunConfig& cfg) {
  json j;
  j["market_csv"] = cfg.market_csv.generic_string();
  j["headlines"] = cfg.headlines_jsonl.generic_string();
  j["cache_dir"] = cfg.cache_dir.generic_string();
  j["output_dir"] = cfg.output_dir.generic_string();
  json uni = json::array();
  for (const auto& t : cfg.universe) uni.push_back(t.str());
  j["universe"] = std::move(uni);
  j["split_date"] = cfg.split_date.to_string();
  j["provider"] = {{"mode", std::string(to_string(cfg.provider_mode))},
                   {"mock_seed", cfg.mock_seed},
                   {"replay_provider_id", cfg.replay_provider_id},
                   {"parallelism", cfg.provider_parallelism},
                   {"headlines_per_prompt", cfg.headlines_per_prompt}};
  j["model"] = json::parse(cfg.model.to_json());
  j["backtest"] = {{"long_only", cfg.backtest_long_only},
                   {"long_short", cfg.backtest_long_short},
                   {"include_ablation", cfg.include_ablation}};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for write: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace newsgraph::pipeline
