// Command-line front end for the newsgraph pipeline.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "newsgraph/date.hpp"
#include "newsgraph/infer/provider.hpp"
#include "newsgraph/pipeline/pipeline.hpp"
#include "newsgraph/pipeline/run_config.hpp"
#include "newsgraph/pipeline/synthetic.hpp"

namespace {

using namespace newsgraph;

struct CommonOpts {
  std::string config;
  std::string split_date;
  std::string provider;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config, "run configuration JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--split-date", o.split_date,
                  "override the train/test split date (YYYY-MM-DD)");
  sub->add_option("--seed", o.seed, "override the model seed");
  sub->add_option("--provider", o.provider, "override the provider mode: live, replay, or mock");
}

pipeline::RunConfig load_with_overrides(const CommonOpts& o) {
  auto cfg = pipeline::load_run_config(o.config);
  if (!o.split_date.empty()) cfg.split_date = Date::parse(o.split_date);
  if (o.seed) cfg.model.seed = *o.seed;
  if (!o.provider.empty()) cfg.provider_mode = infer::provider_mode_from_string(o.provider);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "newsgraph: daily inter-company graphs from news headlines, a GNN+LSTM "
      "movement classifier, and a portfolio backtest"};
  app.require_subcommand(1);

  CommonOpts opts;

  const auto run = [&](auto cmd) { cmd(load_with_overrides(opts), std::cout); };

  auto* ingest = app.add_subcommand("ingest", "build the feature panel and effective headlines");
  add_common(ingest, opts);
  ingest->callback([&] { run([](const auto& c, auto& o) { pipeline::cmd_ingest(c, o); }); });

  auto* infer_graphs =
      app.add_subcommand("infer-graphs", "infer one relation graph per trading day");
  add_common(infer_graphs, opts);
  infer_graphs->callback(
      [&] { run([](const auto& c, auto& o) { pipeline::cmd_infer_graphs(c, o); }); });

  auto* train = app.add_subcommand("train", "train the classifier (and optional ablation)");
  add_common(train, opts);
  train->callback([&] { run([](const auto& c, auto& o) { pipeline::cmd_train(c, o); }); });

  auto* predict = app.add_subcommand("predict", "write test-window predictions");
  add_common(predict, opts);
  predict->callback([&] { run([](const auto& c, auto& o) { pipeline::cmd_predict(c, o); }); });

  auto* evaluate = app.add_subcommand("evaluate", "score predictions: confusion matrix and F1");
  add_common(evaluate, opts);
  evaluate->callback([&] { run([](const auto& c, auto& o) { pipeline::cmd_evaluate(c, o); }); });

  auto* backtest = app.add_subcommand("backtest", "simulate prediction-driven portfolios");
  add_common(backtest, opts);
  backtest->callback([&] { run([](const auto& c, auto& o) { pipeline::cmd_backtest(c, o); }); });

  auto* report = app.add_subcommand("report", "render the equity chart and text summary");
  add_common(report, opts);
  report->callback([&] { run([](const auto& c, auto& o) { pipeline::cmd_report(c, o); }); });

  pipeline::SyntheticSpec spec;
  auto* gen = app.add_subcommand("gen-synthetic",
                                 "generate a self-contained synthetic dataset + config");
  gen->add_option("--out", spec.out_dir, "output directory")->required();
  gen->add_option("--tickers", spec.n_tickers, "universe size")->check(CLI::Range(10, 676));
  gen->add_option("--days", spec.n_days, "trading days to generate")->check(CLI::Range(30, 100000));
  gen->add_option("--seed", spec.seed, "generator seed");
  gen->callback([&] {
    const auto cfg = pipeline::gen_synthetic(spec);
    std::cout << "gen-synthetic: wrote " << cfg.string() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
