#include "newsgraph/pipeline/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "newsgraph/backtest/portfolio.hpp"
#include "newsgraph/backtest/report.hpp"
#include "newsgraph/backtest/simulate.hpp"
#include "newsgraph/calendar.hpp"
#include "newsgraph/errors.hpp"
#include "newsgraph/infer/daily_graph.hpp"
#include "newsgraph/infer/prompt.hpp"
#include "newsgraph/infer/provider.hpp"
#include "newsgraph/ingest/feature_panel.hpp"
#include "newsgraph/ingest/headlines.hpp"
#include "newsgraph/ingest/market_csv.hpp"
#include "newsgraph/model/checkpoint.hpp"
#include "newsgraph/model/trainer.hpp"
#include "newsgraph/model/windows.hpp"
#include "newsgraph/pipeline/artifacts.hpp"

namespace newsgraph::pipeline {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open for write: " + path.string());
  f << text;
  if (!f) throw DataError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Paths {
  std::filesystem::path panel, effective, graphs, checkpoint, checkpoint_ablation, loss_trace,
      predictions, predictions_ablation, metrics, metrics_ablation, backtest, equity_csv,
      equity_svg, summary;
};

Paths paths_for(const RunConfig& cfg) {
  const auto& d = cfg.output_dir;
  return Paths{d / kPanelFile,
               d / kEffectiveHeadlinesFile,
               d / kGraphsFile,
               d / kCheckpointFile,
               d / kAblationCheckpointFile,
               d / kLossTraceFile,
               d / kPredictionsFile,
               d / kAblationPredictionsFile,
               d / kMetricsFile,
               d / kAblationMetricsFile,
               d / kBacktestFile,
               d / kEquityCsvFile,
               d / kEquitySvgFile,
               d / kSummaryFile};
}

// Loads windows with the architecture the checkpoint was trained with, then
// keeps the evaluation side of the split.
std::vector<model::Window> test_windows_for(const ingest::FeaturePanel& panel,
                                            const model::ModelConfig& mc, Date split_date) {
  auto windows = model::make_windows(panel, mc.thresholds, mc.lookback);
  auto [train_w, test_w] = model::split_windows(windows, split_date);
  if (test_w.empty()) throw ConfigError("no evaluation windows after split " + split_date.to_string());
  return test_w;
}

void print_scores(std::ostream& out, const std::string& name, const eval::ConfusionMatrix& cm,
                  const eval::F1Summary& s) {
  static const char* kClass[3] = {"down", "neutral", "up"};
  out << name << ":\n";
  out << "  confusion (rows = actual, cols = predicted):\n";
  for (int r = 0; r < 3; ++r) {
    out << "    " << kClass[r];
    for (int c = 0; c < 3; ++c) out << (c == 0 ? ": " : ", ") << cm.counts[r][c];
    out << "\n";
  }
  for (int c = 0; c < 3; ++c)
    out << "  " << kClass[c] << ": precision " << fmt(s.per_class[c].precision) << "  recall "
        << fmt(s.per_class[c].recall) << "  f1 " << fmt(s.per_class[c].f1) << "  support "
        << s.per_class[c].support << "\n";
  out << "  accuracy " << fmt(s.accuracy) << "  weighted_f1 " << fmt(s.weighted) << "  micro_f1 "
      << fmt(s.micro) << "  macro_f1 " << fmt(s.macro) << "\n";
}

std::string strategy_table(const backtest::StrategyReports& reports) {
  std::string text = "strategy                cum_return   ann_vol    sharpe     max_drawdown\n";
  for (const auto& [name, rep] : reports) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-22s  %10.4f  %8.4f  %8s  %12.4f\n", name.c_str(),
                  rep.cumulative_return, rep.risk.annualized_volatility,
                  rep.risk.sharpe ? fmt(*rep.risk.sharpe).c_str() : "n/a", rep.risk.max_drawdown);
    text += line;
  }
  return text;
}

backtest::StrategyReports parse_backtest_json(const std::filesystem::path& path) {
  json root;
  try {
    root = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw DataError(path.string() + " is not valid JSON: " + e.what());
  }
  backtest::StrategyReports out;
  try {
    for (const auto& [name, j] : root.items()) {
      backtest::BacktestReport rep;
      rep.cumulative_return = j.at("cumulative_return").get<double>();
      rep.risk.annualized_volatility = j.at("annualized_volatility").get<double>();
      if (!j.at("sharpe").is_null()) rep.risk.sharpe = j.at("sharpe").get<double>();
      rep.risk.max_drawdown = j.at("max_drawdown").get<double>();
      for (const auto& d : j.at("dates")) rep.dates.push_back(Date::parse(d.get<std::string>()));
      rep.daily_returns = j.at("daily_returns").get<std::vector<double>>();
      rep.equity_curve = j.at("equity_curve").get<std::vector<double>>();
      out.emplace_back(name, std::move(rep));
    }
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": unexpected report shape: " + e.what());
  }
  if (out.empty()) throw DataError(path.string() + " holds no strategies");
  return out;
}

}  // namespace

IngestSummary cmd_ingest(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);
  const auto p = paths_for(cfg);

  const auto all_bars = ingest::parse_market_csv(cfg.market_csv);
  const std::set<Ticker> members(cfg.universe.begin(), cfg.universe.end());
  std::vector<Bar> bars;
  bars.reserve(all_bars.size());
  for (const auto& b : all_bars)
    if (members.count(b.ticker)) bars.push_back(b);
  if (bars.empty()) throw DataError("no bars for any universe ticker in " + cfg.market_csv.string());

  const auto cal = TradingCalendar::from_bars(bars);
  if (cfg.split_date < cal.first() || cfg.split_date >= cal.last())
    throw ConfigError("split date " + cfg.split_date.to_string() +
                      " must fall inside the trading range [" + cal.first().to_string() + ", " +
                      cal.last().to_string() + ")");

  const auto panel = ingest::build_feature_panel(bars, cal, cfg.universe, cfg.split_date);
  ingest::save_panel(p.panel, panel);
  write_artifact_meta(p.panel, {{"market.csv", cfg.market_csv}});

  const auto headlines = ingest::parse_headlines(cfg.headlines_jsonl);
  std::vector<ingest::HeadlineRecord> kept;
  kept.reserve(headlines.size());
  std::size_t dropped = 0;
  for (const auto& h : headlines) {
    try {
      kept.push_back(ingest::assign_effective_date(h, cal));
    } catch (const std::out_of_range&) {
      ++dropped;  // stamped after the last trading day; no session to attach to
    }
  }
  ingest::write_headlines(p.effective, kept);
  write_artifact_meta(p.effective,
                      {{"headlines.jsonl", cfg.headlines_jsonl}, {"market.csv", cfg.market_csv}});

  IngestSummary s;
  s.bars = bars.size();
  s.tickers = panel.ticker_count();
  s.dates = panel.date_count();
  s.headlines_in = headlines.size();
  s.headlines_kept = kept.size();
  s.headlines_dropped = dropped;
  out << "ingest: " << s.bars << " bars -> panel " << s.tickers << " tickers x " << s.dates
      << " days (train <= " << cfg.split_date.to_string() << "); " << s.headlines_kept << "/"
      << s.headlines_in << " headlines kept";
  if (dropped) out << " (" << dropped << " after final trading day)";
  out << "\n";
  return s;
}

InferSummary cmd_infer_graphs(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto p = paths_for(cfg);
  verify_artifact(p.panel);
  verify_artifact(p.effective);

  const auto panel = ingest::load_panel(p.panel);
  const auto headlines = ingest::parse_headlines(p.effective);

  std::map<Date, std::vector<std::string>> texts_by_date;
  for (const auto& h : headlines) {
    if (!h.effective_date)
      throw DataError(p.effective.string() + " holds a headline without an effective date");
    texts_by_date[*h.effective_date].push_back(h.text);
  }

  std::vector<infer::PromptRequest> requests;
  std::size_t days_with_news = 0;
  for (const auto& d : panel.dates) {
    const auto it = texts_by_date.find(d);
    if (it == texts_by_date.end()) continue;
    ++days_with_news;
    const auto& texts = it->second;
    for (std::size_t i = 0; i < texts.size(); i += cfg.headlines_per_prompt) {
      const auto last = std::min(texts.size(), i + cfg.headlines_per_prompt);
      requests.push_back(infer::build_prompt(
          d, std::vector<std::string>(texts.begin() + i, texts.begin() + last), panel.tickers));
    }
  }

  auto provider = infer::make_provider(cfg.provider_mode, cfg.mock_seed, cfg.replay_provider_id);
  infer::ResponseCache cache(cfg.cache_dir);

  if (provider.mode == infer::ProviderMode::Replay) {
    std::set<Date> missing;
    for (const auto& r : requests)
      if (!cache.lookup(provider.id, r.prompt_text)) missing.insert(r.date);
    if (!missing.empty()) {
      std::string msg = "replay cache for provider '" + provider.id + "' is missing " +
                        std::to_string(missing.size()) + " day(s):";
      for (const auto& d : missing) msg += " " + d.to_string();
      throw CacheMissError(msg);
    }
  }

  const auto calls_before = infer::provider_call_count();
  const auto affected_sets =
      infer::query_all(requests, provider, cache, cfg.provider_parallelism);
  const auto calls = infer::provider_call_count() - calls_before;

  // Batches of one day merge in request order; repeated tickers keep the
  // sentiment from the earliest batch.
  std::map<Date, std::vector<std::pair<Ticker, Sentiment>>> merged;
  for (const auto& a : affected_sets) {
    auto& entries = merged[a.date];
    for (const auto& e : a.entries) {
      const bool dup = std::any_of(entries.begin(), entries.end(),
                                   [&](const auto& have) { return have.first == e.first; });
      if (!dup) entries.push_back(e);
    }
  }

  std::vector<infer::DailyGraph> graphs;
  graphs.reserve(panel.date_count());
  std::size_t edges = 0;
  for (const auto& d : panel.dates) {
    infer::AffectedSet day;
    day.date = d;
    if (const auto it = merged.find(d); it != merged.end()) day.entries = it->second;
    graphs.push_back(infer::build_daily_graph(day, panel.tickers));
    edges += graphs.back().edge_count();
  }
  infer::save_graphs(p.graphs, graphs);
  write_artifact_meta(p.graphs,
                      {{kPanelFile, p.panel}, {kEffectiveHeadlinesFile, p.effective}});

  InferSummary s;
  s.days = panel.date_count();
  s.days_with_news = days_with_news;
  s.prompts = requests.size();
  s.provider_calls = calls;
  s.edges = edges;
  out << "infer-graphs: " << s.days << " days (" << s.days_with_news << " with news), "
      << s.prompts << " prompts, " << s.provider_calls << " provider calls ("
      << (s.prompts - s.provider_calls) << " cached), " << s.edges << " edges\n";
  return s;
}

TrainSummary cmd_train(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto p = paths_for(cfg);
  verify_artifact(p.panel);
  verify_artifact(p.graphs);
  verify_inputs(p.graphs, {{kPanelFile, p.panel}, {kEffectiveHeadlinesFile, p.effective}});

  const auto panel = ingest::load_panel(p.panel);
  const auto graphs = infer::load_graphs(p.graphs, panel.tickers);

  const auto windows = model::make_windows(panel, cfg.model.thresholds, cfg.model.lookback);
  const auto [train_w, test_w] = model::split_windows(windows, cfg.split_date);
  if (train_w.empty())
    throw ConfigError("no training windows labeled at or before " + cfg.split_date.to_string());
  if (test_w.empty())
    throw ConfigError("no evaluation windows after " + cfg.split_date.to_string());
  out << "train: " << train_w.size() << " train / " << test_w.size() << " test windows, "
      << cfg.model.epochs << " epochs\n";

  json trace = json::object();
  const auto full = model::train(panel, graphs, train_w, cfg.model, false);
  model::save_checkpoint(p.checkpoint, full.params);
  write_artifact_meta(p.checkpoint, {{kPanelFile, p.panel}, {kGraphsFile, p.graphs}});
  trace["full"] = full.epoch_losses;

  TrainSummary s;
  s.train_windows = train_w.size();
  s.test_windows = test_w.size();
  s.final_loss = full.epoch_losses.back();
  out << "train: full model final loss " << fmt(s.final_loss) << " ("
      << full.params.parameter_count() << " parameters)\n";

  if (cfg.include_ablation) {
    const auto ablation = model::train(panel, graphs, train_w, cfg.model, true);
    model::save_checkpoint(p.checkpoint_ablation, ablation.params);
    write_artifact_meta(p.checkpoint_ablation, {{kPanelFile, p.panel}, {kGraphsFile, p.graphs}});
    trace["ablation"] = ablation.epoch_losses;
    s.final_loss_ablation = ablation.epoch_losses.back();
    out << "train: ablation final loss " << fmt(*s.final_loss_ablation) << " ("
        << ablation.params.parameter_count() << " parameters)\n";
  }

  write_text(p.loss_trace, trace.dump(2) + "\n");
  write_artifact_meta(p.loss_trace, {{kPanelFile, p.panel}, {kGraphsFile, p.graphs}});
  return s;
}

PredictSummary cmd_predict(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto p = paths_for(cfg);
  verify_artifact(p.panel);
  verify_artifact(p.graphs);
  verify_artifact(p.checkpoint);
  verify_inputs(p.checkpoint, {{kPanelFile, p.panel}, {kGraphsFile, p.graphs}});

  const auto panel = ingest::load_panel(p.panel);
  const auto graphs = infer::load_graphs(p.graphs, panel.tickers);

  const auto params = model::load_checkpoint(p.checkpoint);
  const auto test_w = test_windows_for(panel, params.config, cfg.split_date);
  const auto preds = model::predict(panel, graphs, test_w, params);
  model::write_predictions_csv(p.predictions, preds);
  write_artifact_meta(p.predictions, {{kPanelFile, p.panel},
                                      {kGraphsFile, p.graphs},
                                      {kCheckpointFile, p.checkpoint}});

  PredictSummary s;
  s.predictions = preds.size();

  if (cfg.include_ablation) {
    verify_artifact(p.checkpoint_ablation);
    verify_inputs(p.checkpoint_ablation, {{kPanelFile, p.panel}, {kGraphsFile, p.graphs}});
    const auto ab_params = model::load_checkpoint(p.checkpoint_ablation);
    const auto ab_test = test_windows_for(panel, ab_params.config, cfg.split_date);
    const auto ab_preds = model::predict(panel, graphs, ab_test, ab_params);
    model::write_predictions_csv(p.predictions_ablation, ab_preds);
    write_artifact_meta(p.predictions_ablation,
                        {{kPanelFile, p.panel},
                         {kGraphsFile, p.graphs},
                         {kAblationCheckpointFile, p.checkpoint_ablation}});
    s.wrote_ablation = true;
  }

  out << "predict: " << s.predictions << " test predictions"
      << (s.wrote_ablation ? " (full + ablation)" : "") << "\n";
  return s;
}

EvaluateSummary cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto p = paths_for(cfg);

  const auto evaluate_one = [&](const std::filesystem::path& pred_path,
                                const std::filesystem::path& metrics_path,
                                const std::string& pred_name, const std::string& title) {
    verify_artifact(pred_path);
    const auto preds = model::read_predictions_csv(pred_path);
    std::vector<std::pair<MovementLabel, MovementLabel>> pairs;
    pairs.reserve(preds.size());
    for (const auto& pr : preds) pairs.emplace_back(pr.actual, pr.predicted);
    const auto cm = eval::confusion(pairs);
    const auto scores = eval::f1_scores(cm);
    write_text(metrics_path, eval::metrics_report_json(cm, scores));
    write_artifact_meta(metrics_path, {{pred_name, pred_path}});
    print_scores(out, title, cm, scores);
    return scores;
  };

  EvaluateSummary s;
  s.full = evaluate_one(p.predictions, p.metrics, kPredictionsFile, "full model");
  if (cfg.include_ablation)
    s.ablation = evaluate_one(p.predictions_ablation, p.metrics_ablation,
                              kAblationPredictionsFile, "ablation (no graph stream)");
  return s;
}

BacktestSummary cmd_backtest(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto p = paths_for(cfg);
  verify_artifact(p.panel);
  verify_artifact(p.predictions);

  const auto panel = ingest::load_panel(p.panel);

  // close-to-close return from each date to the next trading day
  std::map<Date, std::map<Ticker, double>> realized;
  for (std::size_t d = 0; d + 1 < panel.date_count(); ++d) {
    auto& day = realized[panel.dates[d]];
    for (std::size_t t = 0; t < panel.ticker_count(); ++t)
      day[panel.tickers[t]] = panel.close_at(t, d + 1) / panel.close_at(t, d) - 1.0;
  }

  // Predictions target their label date; the position is taken at the close
  // of the previous trading day and held over that day's return.
  const auto weights_for = [&](const std::vector<model::Prediction>& preds, bool long_short) {
    std::map<Date, std::vector<std::pair<Ticker, MovementLabel>>> by_date;
    for (const auto& pr : preds) by_date[pr.date].emplace_back(pr.ticker, pr.predicted);
    std::vector<backtest::DailyWeights> weights;
    weights.reserve(by_date.size());
    for (const auto& [label_date, day_preds] : by_date) {
      const auto idx = panel.date_index(label_date);
      if (idx == 0) throw DataError("prediction targets the first panel date");
      const auto stance_date = panel.dates[idx - 1];
      weights.push_back(long_short ? backtest::long_short_weights(stance_date, day_preds)
                                   : backtest::long_only_weights(stance_date, day_preds));
    }
    return weights;
  };

  const auto full_preds = model::read_predictions_csv(p.predictions);
  std::vector<model::Prediction> ablation_preds;
  std::map<std::string, std::filesystem::path> inputs{{kPanelFile, p.panel},
                                                      {kPredictionsFile, p.predictions}};
  if (cfg.include_ablation) {
    verify_artifact(p.predictions_ablation);
    ablation_preds = model::read_predictions_csv(p.predictions_ablation);
    inputs.emplace(kAblationPredictionsFile, p.predictions_ablation);
  }

  backtest::StrategyReports reports;
  const auto add = [&](const std::string& name, const std::vector<model::Prediction>& preds,
                       bool long_short) {
    reports.emplace_back(name, backtest::simulate(weights_for(preds, long_short), realized));
  };
  if (cfg.backtest_long_only) add("full_long_only", full_preds, false);
  if (cfg.backtest_long_short) add("full_long_short", full_preds, true);
  if (cfg.include_ablation) {
    if (cfg.backtest_long_only) add("ablation_long_only", ablation_preds, false);
    if (cfg.backtest_long_short) add("ablation_long_short", ablation_preds, true);
  }

  backtest::write_report_json(p.backtest, reports);
  write_artifact_meta(p.backtest, inputs);
  backtest::write_equity_csv(p.equity_csv, reports);
  write_artifact_meta(p.equity_csv, {{kBacktestFile, p.backtest}});

  out << strategy_table(reports);

  BacktestSummary s;
  for (const auto& [name, rep] : reports) {
    s.strategies.push_back(name);
    s.days = rep.dates.size();
  }
  return s;
}

void cmd_report(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto p = paths_for(cfg);
  verify_artifact(p.backtest);

  const auto reports = parse_backtest_json(p.backtest);
  backtest::write_equity_svg(p.equity_svg, reports);
  write_artifact_meta(p.equity_svg, {{kBacktestFile, p.backtest}});

  const std::string table = strategy_table(reports);
  write_text(p.summary, table);
  write_artifact_meta(p.summary, {{kBacktestFile, p.backtest}});

  out << table;
  out << "report: wrote " << p.equity_svg.string() << " and " << p.summary.string() << "\n";
}

}  // namespace newsgraph::pipeline
