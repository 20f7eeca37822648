// Microbenchmarks for the hot paths: tape math, the LSTM step loop, file
// ingest, metrics, and the portfolio simulator.

#include <benchmark/benchmark.h>

#include <map>
#include <sstream>
#include <vector>

#include "newsgraph/autograd/tensor.hpp"
#include "newsgraph/backtest/simulate.hpp"
#include "newsgraph/eval/metrics.hpp"
#include "newsgraph/ingest/headlines.hpp"
#include "newsgraph/ingest/market_csv.hpp"
#include "newsgraph/model/network.hpp"
#include "newsgraph/rng.hpp"
#include "newsgraph/types.hpp"

using namespace newsgraph;
using autograd::Tape;
using autograd::Tensor;

namespace {

Tensor random_tensor(Rng& rng, std::size_t r, std::size_t c, bool grad) {
  std::vector<double> v(r * c);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor::from_data({r, c}, std::move(v), grad);
}

void bm_matmul_forward_backward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto a = random_tensor(rng, n, n, true);
  const auto b = random_tensor(rng, n, n, true);
  for (auto _ : state) {
    Tape tape;
    auto loss = tape.sum(tape.matmul(a, b));
    tape.backward(loss);
    benchmark::DoNotOptimize(loss.item());
    const_cast<Tensor&>(a).zero_grad();
    const_cast<Tensor&>(b).zero_grad();
  }
  state.SetItemsProcessed(state.iterations() * n * n * n);
}

void bm_lstm_forward_backward(benchmark::State& state) {
  const std::size_t batch = static_cast<std::size_t>(state.range(0));
  const int hidden = 64;
  const std::size_t in_dim = 41;
  Rng rng(2);
  model::LstmParams p;
  p.wx = random_tensor(rng, in_dim, 4 * hidden, true);
  p.wh = random_tensor(rng, hidden, 4 * hidden, true);
  p.bias = random_tensor(rng, 1, 4 * hidden, true);
  std::vector<Tensor> steps;
  for (int t = 0; t < 10; ++t) steps.push_back(random_tensor(rng, batch, in_dim, false));
  for (auto _ : state) {
    Tape tape;
    auto h = model::lstm_forward(tape, steps, p, hidden);
    auto loss = tape.sum(h);
    tape.backward(loss);
    benchmark::DoNotOptimize(loss.item());
    p.wx.zero_grad();
    p.wh.zero_grad();
    p.bias.zero_grad();
  }
  state.SetItemsProcessed(state.iterations() * batch * 10);
}

void bm_market_csv_parse(benchmark::State& state) {
  const int rows = static_cast<int>(state.range(0));
  std::ostringstream csv;
  csv << ingest::kMarketCsvHeader << '\n';
  Rng rng(3);
  Date d = Date::from_ymd(2020, 1, 6);
  for (int i = 0; i < rows; ++i) {
    const double close = 50.0 + rng.uniform(0.0, 10.0);
    csv << "AAPL," << d.to_string() << ',' << close * 0.99 << ',' << close << ',' << close * 1.01
        << ',' << close * 0.98 << ',' << close * 1.001 << ',' << close * 0.999 << ",1000000,0\n";
    d = d.plus_days(1);
    while (d.is_weekend()) d = d.plus_days(1);
  }
  const std::string text = csv.str();
  for (auto _ : state) {
    std::istringstream in(text);
    auto bars = ingest::parse_market_csv(in);
    benchmark::DoNotOptimize(bars.size());
  }
  state.SetItemsProcessed(state.iterations() * rows);
}

void bm_headlines_parse(benchmark::State& state) {
  const int rows = static_cast<int>(state.range(0));
  std::ostringstream out;
  for (int i = 0; i < rows; ++i)
    out << R"({"headline":"Story number )" << i
        << R"( moves the market","timestamp":"2020-03-02T09:30:00-05:00","provider":"bench"})"
        << '\n';
  const std::string text = out.str();
  for (auto _ : state) {
    std::istringstream in(text);
    auto records = ingest::parse_headlines(in);
    benchmark::DoNotOptimize(records.size());
  }
  state.SetItemsProcessed(state.iterations() * rows);
}

void bm_f1_scores(benchmark::State& state) {
  Rng rng(4);
  std::vector<std::pair<MovementLabel, MovementLabel>> pairs;
  for (int i = 0; i < 10000; ++i)
    pairs.emplace_back(static_cast<MovementLabel>(rng.next_below(3)),
                       static_cast<MovementLabel>(rng.next_below(3)));
  for (auto _ : state) {
    const auto cm = eval::confusion(pairs);
    const auto s = eval::f1_scores(cm);
    benchmark::DoNotOptimize(s.macro);
  }
  state.SetItemsProcessed(state.iterations() * pairs.size());
}

void bm_simulate(benchmark::State& state) {
  const int days = static_cast<int>(state.range(0));
  const std::vector<Ticker> tickers = {Ticker("AAA"), Ticker("BBB"), Ticker("CCC"),
                                       Ticker("DDD"), Ticker("EEE")};
  Rng rng(5);
  std::vector<backtest::DailyWeights> weights;
  std::map<Date, std::map<Ticker, double>> realized;
  Date d = Date::from_ymd(2018, 1, 8);
  for (int i = 0; i < days; ++i) {
    backtest::DailyWeights w;
    w.date = d;
    for (const auto& t : tickers) {
      w.weights[t] = rng.uniform(-0.3, 0.3);
      realized[d][t] = rng.uniform(-0.04, 0.04);
    }
    weights.push_back(std::move(w));
    d = d.plus_days(1);
    while (d.is_weekend()) d = d.plus_days(1);
  }
  for (auto _ : state) {
    auto rep = backtest::simulate(weights, realized);
    benchmark::DoNotOptimize(rep.cumulative_return);
  }
  state.SetItemsProcessed(state.iterations() * days);
}

}  // namespace

BENCHMARK(bm_matmul_forward_backward)->Arg(32)->Arg(128);
BENCHMARK(bm_lstm_forward_backward)->Arg(64)->Arg(256);
BENCHMARK(bm_market_csv_parse)->Arg(1000)->Arg(10000);
BENCHMARK(bm_headlines_parse)->Arg(1000);
BENCHMARK(bm_f1_scores);
BENCHMARK(bm_simulate)->Arg(252)->Arg(2520);

BENCHMARK_MAIN();
