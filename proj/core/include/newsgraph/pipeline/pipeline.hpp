#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "newsgraph/eval/metrics.hpp"
#include "newsgraph/pipeline/run_config.hpp"

namespace newsgraph::pipeline {

// Fixed artifact names under output_dir. Every artifact gets a .meta.json
// sidecar; downstream commands verify the recorded hashes and refuse to mix
// artifacts from different runs.
inline constexpr const char* kPanelFile = "panel.json";
inline constexpr const char* kEffectiveHeadlinesFile = "headlines_effective.jsonl";
inline constexpr const char* kGraphsFile = "graphs.ndjson";
inline constexpr const char* kCheckpointFile = "checkpoint.bin";
inline constexpr const char* kAblationCheckpointFile = "checkpoint_ablation.bin";
inline constexpr const char* kLossTraceFile = "loss_trace.json";
inline constexpr const char* kPredictionsFile = "predictions.csv";
inline constexpr const char* kAblationPredictionsFile = "predictions_ablation.csv";
inline constexpr const char* kMetricsFile = "metrics.json";
inline constexpr const char* kAblationMetricsFile = "metrics_ablation.json";
inline constexpr const char* kBacktestFile = "backtest.json";
inline constexpr const char* kEquityCsvFile = "equity.csv";
inline constexpr const char* kEquitySvgFile = "equity.svg";
inline constexpr const char* kSummaryFile = "summary.txt";

struct IngestSummary {
  std::size_t bars = 0;
  std::size_t tickers = 0;
  std::size_t dates = 0;
  std::size_t headlines_in = 0;
  std::size_t headlines_kept = 0;
  std::size_t headlines_dropped = 0;  // stamped past the final trading day
};

struct InferSummary {
  std::size_t days = 0;
  std::size_t days_with_news = 0;
  std::size_t prompts = 0;
  std::size_t provider_calls = 0;  // backend calls, i.e. cache misses
  std::size_t edges = 0;
};

struct TrainSummary {
  std::size_t train_windows = 0;
  std::size_t test_windows = 0;
  double final_loss = 0;
  std::optional<double> final_loss_ablation;
};

struct PredictSummary {
  std::size_t predictions = 0;
  bool wrote_ablation = false;
};

struct EvaluateSummary {
  eval::F1Summary full;
  std::optional<eval::F1Summary> ablation;
};

struct BacktestSummary {
  std::vector<std::string> strategies;
  std::size_t days = 0;
};

// Market CSV + headlines -> standardized feature panel and headlines tagged
// with their effective trading date.
IngestSummary cmd_ingest(const RunConfig& cfg, std::ostream& out);

// One relation graph per trading day via the configured provider, cache
// first. Replay aborts up front with every uncached date listed.
InferSummary cmd_infer_graphs(const RunConfig& cfg, std::ostream& out);

// Trains the full model (and, when configured, the graph-blind ablation) on
// windows labeled at or before the split date.
TrainSummary cmd_train(const RunConfig& cfg, std::ostream& out);

// Test-window predictions from the saved checkpoints. Refuses checkpoints
// trained against different panel or graph bytes.
PredictSummary cmd_predict(const RunConfig& cfg, std::ostream& out);

// Confusion matrix and F1 report per model.
EvaluateSummary cmd_evaluate(const RunConfig& cfg, std::ostream& out);

// Converts predictions into portfolio weights and simulates next-day
// close-to-close performance for each enabled strategy.
BacktestSummary cmd_backtest(const RunConfig& cfg, std::ostream& out);

// Renders the backtest into an SVG chart and a plain-text summary.
void cmd_report(const RunConfig& cfg, std::ostream& out);

}  // namespace newsgraph::pipeline
