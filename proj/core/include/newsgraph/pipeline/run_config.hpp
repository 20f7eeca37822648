#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "newsgraph/date.hpp"
#include "newsgraph/infer/provider.hpp"
#include "newsgraph/model/model_config.hpp"
#include "newsgraph/types.hpp"

namespace newsgraph::pipeline {

// Everything a run needs except secrets, which stay in the environment.
struct RunConfig {
  std::filesystem::path market_csv;
  std::filesystem::path headlines_jsonl;
  std::filesystem::path cache_dir;
  std::filesystem::path output_dir;

  std::vector<Ticker> universe;
  Date split_date;

  infer::ProviderMode provider_mode = infer::ProviderMode::Mock;
  std::uint64_t mock_seed = 7;
  std::string replay_provider_id;  // empty = mock id for mock_seed
  int provider_parallelism = 4;
  int headlines_per_prompt = 40;

  model::ModelConfig model;

  bool backtest_long_only = true;
  bool backtest_long_short = true;
  bool include_ablation = true;

  void validate() const;  // throws ConfigError on structural problems
};

// JSON config file; relative paths resolve against the config file's
// directory. Unknown keys are rejected so typos fail loudly.
RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const std::filesystem::path& path, const RunConfig& cfg);

}  // namespace newsgraph::pipeline
