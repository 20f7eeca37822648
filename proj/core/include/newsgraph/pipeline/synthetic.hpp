#pragma once

#include <cstdint>
#include <filesystem>

namespace newsgraph::pipeline {

// Offline end-to-end fixture with a planted graph-contagion signal: each
// day a handful of tickers are "in the news" (clique); an affected ticker's
// next-day return is driven mostly by its co-affected neighbors' same-day
// shock and partly by its own, so the graph stream carries information the
// per-ticker stream cannot see.
struct SyntheticSpec {
  int n_tickers = 30;
  int n_days = 300;
  std::uint64_t seed = 2020;
  std::filesystem::path out_dir;
};

// Writes market.csv, headlines.jsonl, and a ready-to-run config.json into
// out_dir; returns the config path.
std::filesystem::path gen_synthetic(const SyntheticSpec& spec);

}  // namespace newsgraph::pipeline
