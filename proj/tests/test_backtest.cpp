#include <doctest.h>

#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <vector>

#include "newsgraph/backtest/portfolio.hpp"
#include "newsgraph/backtest/report.hpp"
#include "newsgraph/backtest/simulate.hpp"
#include "newsgraph/errors.hpp"
#include "newsgraph/rng.hpp"

using namespace newsgraph;
using namespace newsgraph::backtest;

namespace {

Date day(int offset) { return Date::parse("2021-06-01").plus_days(offset); }

}  // namespace

TEST_CASE("long-only weights spread 1/k over predicted ups") {
  const auto w = long_only_weights(day(0), {{Ticker("A"), MovementLabel::Up},
                                            {Ticker("B"), MovementLabel::Down},
                                            {Ticker("C"), MovementLabel::Up},
                                            {Ticker("D"), MovementLabel::Neutral}});
  CHECK(w.date == day(0));
  REQUIRE(w.weights.size() == 4);  // zeros included
  CHECK(w.weights.at(Ticker("A")) == doctest::Approx(0.5));
  CHECK(w.weights.at(Ticker("C")) == doctest::Approx(0.5));
  CHECK(w.weights.at(Ticker("B")) == 0.0);
  CHECK(w.weights.at(Ticker("D")) == 0.0);

  // nobody predicted up -> all cash
  const auto cash = long_only_weights(day(0), {{Ticker("A"), MovementLabel::Down}});
  CHECK(cash.weights.at(Ticker("A")) == 0.0);

  CHECK_THROWS_AS(long_only_weights(day(0), {{Ticker("A"), MovementLabel::Up},
                                             {Ticker("A"), MovementLabel::Down}}),
                  DataError);
}

TEST_CASE("long-short weights split both sides") {
  const auto w = long_short_weights(day(0), {{Ticker("A"), MovementLabel::Up},
                                             {Ticker("B"), MovementLabel::Down},
                                             {Ticker("C"), MovementLabel::Down},
                                             {Ticker("D"), MovementLabel::Neutral}});
  CHECK(w.weights.at(Ticker("A")) == doctest::Approx(1.0));
  CHECK(w.weights.at(Ticker("B")) == doctest::Approx(-0.5));
  CHECK(w.weights.at(Ticker("C")) == doctest::Approx(-0.5));
  CHECK(w.weights.at(Ticker("D")) == 0.0);

  // one-sided stays one-sided
  const auto longs = long_short_weights(day(0), {{Ticker("A"), MovementLabel::Up}});
  CHECK(longs.weights.at(Ticker("A")) == doctest::Approx(1.0));
}

TEST_CASE("max drawdown on the reference path is exactly a quarter") {
  CHECK(max_drawdown({1.0, 1.2, 0.9, 1.1}) == 0.25);
  CHECK(max_drawdown({1.0, 1.1, 1.2}) == 0.0);  // monotone rise never draws down
  CHECK(max_drawdown({1.0}) == 0.0);
  CHECK(max_drawdown({2.0, 1.0}) == 0.5);
}

TEST_CASE("risk metrics against a scalar recomputation") {
  const std::vector<double> rets{0.01, -0.02, 0.005, 0.015, -0.01};
  const auto m = risk_metrics(rets);
  double mean = 0;
  for (double r : rets) mean += r;
  mean /= static_cast<double>(rets.size());
  double ss = 0;
  for (double r : rets) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / (static_cast<double>(rets.size()) - 1.0));
  CHECK(m.annualized_volatility == doctest::Approx(sd * std::sqrt(252.0)).epsilon(1e-12));
  REQUIRE(m.sharpe.has_value());
  CHECK(*m.sharpe == doctest::Approx(mean / sd * std::sqrt(252.0)).epsilon(1e-12));
  CHECK_THROWS_AS(risk_metrics({0.01}), std::domain_error);
}

TEST_CASE("zero-variance returns leave sharpe undefined") {
  const auto m = risk_metrics({0.0, 0.0, 0.0});
  CHECK(m.annualized_volatility == 0.0);
  CHECK_FALSE(m.sharpe.has_value());
  const auto flat = risk_metrics({0.01, 0.01, 0.01});
  CHECK_FALSE(flat.sharpe.has_value());  // constant but nonzero: stdev is still 0
}

TEST_CASE("simulate compounds daily portfolio returns") {
  std::vector<DailyWeights> weights;
  weights.push_back({day(0), {{Ticker("A"), 0.5}, {Ticker("B"), 0.5}}});
  weights.push_back({day(1), {{Ticker("A"), 1.0}, {Ticker("B"), 0.0}}});
  weights.push_back({day(2), {{Ticker("A"), 0.0}, {Ticker("B"), -1.0}}});
  std::map<Date, std::map<Ticker, double>> realized;
  realized[day(0)] = {{Ticker("A"), 0.02}, {Ticker("B"), -0.01}};
  realized[day(1)] = {{Ticker("A"), 0.03}, {Ticker("B"), 0.10}};
  realized[day(2)] = {{Ticker("A"), -0.05}, {Ticker("B"), -0.04}};

  const auto rep = simulate(weights, realized);
  REQUIRE(rep.daily_returns.size() == 3);
  CHECK(rep.daily_returns[0] == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(rep.daily_returns[1] == doctest::Approx(0.03).epsilon(1e-15));
  CHECK(rep.daily_returns[2] == doctest::Approx(0.04).epsilon(1e-15));
  REQUIRE(rep.equity_curve.size() == 4);
  CHECK(rep.equity_curve[0] == 1.0);
  CHECK(rep.equity_curve[1] == doctest::Approx(1.005).epsilon(1e-15));
  CHECK(rep.equity_curve[3] ==
        doctest::Approx(1.005 * 1.03 * 1.04).epsilon(1e-15));
  CHECK(rep.cumulative_return ==
        doctest::Approx(1.005 * 1.03 * 1.04 - 1.0).epsilon(1e-15));
  CHECK(rep.dates == std::vector<Date>{day(0), day(1), day(2)});
}

TEST_CASE("simulate validates inputs") {
  std::map<Date, std::map<Ticker, double>> realized;
  realized[day(0)] = {{Ticker("A"), 0.01}};
  // nonzero weight without a realized return
  CHECK_THROWS_AS(simulate({{day(0), {{Ticker("Z"), 1.0}}}}, realized), DataError);
  // zero weight without a return is fine
  CHECK_NOTHROW(simulate({{day(0), {{Ticker("A"), 1.0}, {Ticker("Z"), 0.0}}}}, realized));
  // dates must strictly increase
  CHECK_THROWS_AS(simulate({{day(1), {{Ticker("A"), 1.0}}}, {day(0), {{Ticker("A"), 1.0}}}},
                           realized),
                  DataError);
  CHECK_THROWS_AS(simulate({}, realized), DataError);
}

TEST_CASE("all-cash weights produce zero metrics with undefined sharpe") {
  std::map<Date, std::map<Ticker, double>> realized;
  for (int i = 0; i < 3; ++i) realized[day(i)] = {{Ticker("A"), 0.01 * (i + 1)}};
  std::vector<DailyWeights> weights;
  for (int i = 0; i < 3; ++i) weights.push_back({day(i), {{Ticker("A"), 0.0}}});
  const auto rep = simulate(weights, realized);
  CHECK(rep.cumulative_return == 0.0);
  CHECK(rep.risk.annualized_volatility == 0.0);
  CHECK(rep.risk.max_drawdown == 0.0);
  CHECK_FALSE(rep.risk.sharpe.has_value());
}

TEST_CASE("cost hook charges against the day's return") {
  std::map<Date, std::map<Ticker, double>> realized;
  realized[day(0)] = {{Ticker("A"), 0.02}};
  realized[day(1)] = {{Ticker("A"), 0.02}};
  std::vector<DailyWeights> weights{{day(0), {{Ticker("A"), 1.0}}},
                                    {day(1), {{Ticker("A"), 1.0}}}};
  const auto rep = simulate(weights, realized,
                            [](const DailyWeights&, const DailyWeights&) { return 0.001; });
  CHECK(rep.daily_returns[0] == doctest::Approx(0.019).epsilon(1e-15));
  CHECK(rep.daily_returns[1] == doctest::Approx(0.019).epsilon(1e-15));
}

TEST_CASE("simulate matches a scalar hand simulation on random fixtures") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int days = 10;
    const std::vector<Ticker> tickers{Ticker("A"), Ticker("B"), Ticker("C")};
    std::map<Date, std::map<Ticker, double>> realized;
    std::vector<DailyWeights> weights;
    for (int d = 0; d < days; ++d) {
      DailyWeights w;
      w.date = day(d);
      for (const auto& t : tickers) {
        realized[day(d)][t] = rng.uniform(-0.05, 0.05);
        w.weights[t] = rng.uniform(-1.0, 1.0);
      }
      weights.push_back(std::move(w));
    }
    const auto rep = simulate(weights, realized);

    double equity = 1.0, peak = 1.0, dd = 0.0;
    std::vector<double> rets;
    for (int d = 0; d < days; ++d) {
      double r = 0;
      for (const auto& t : tickers) r += weights[static_cast<std::size_t>(d)].weights.at(t) * realized.at(day(d)).at(t);
      rets.push_back(r);
      equity *= 1.0 + r;
      peak = std::max(peak, equity);
      dd = std::max(dd, 1.0 - equity / peak);
      CHECK(rep.daily_returns[static_cast<std::size_t>(d)] == doctest::Approx(r).epsilon(1e-12));
      CHECK(rep.equity_curve[static_cast<std::size_t>(d) + 1] ==
            doctest::Approx(equity).epsilon(1e-12));
    }
    CHECK(rep.cumulative_return == doctest::Approx(equity - 1.0).epsilon(1e-12));
    CHECK(rep.risk.max_drawdown == doctest::Approx(dd).epsilon(1e-12));
  }
}

TEST_CASE("report json serializes metrics and null sharpe") {
  std::map<Date, std::map<Ticker, double>> realized;
  for (int i = 0; i < 3; ++i) realized[day(i)] = {{Ticker("A"), 0.01}};
  std::vector<DailyWeights> active, cash;
  for (int i = 0; i < 3; ++i) {
    active.push_back({day(i), {{Ticker("A"), 1.0}}});
    cash.push_back({day(i), {{Ticker("A"), 0.0}}});
  }
  StrategyReports reports{{"active", simulate(active, realized)},
                          {"cash", simulate(cash, realized)}};
  const auto j = nlohmann::json::parse(report_json(reports));
  CHECK(j.at("active").at("cumulative_return").get<double>() ==
        doctest::Approx(1.01 * 1.01 * 1.01 - 1.0));
  CHECK(j.at("active").at("sharpe").is_null());  // constant returns: stdev 0
  CHECK(j.at("cash").at("sharpe").is_null());
  CHECK(j.at("active").at("dates").size() == 3);
  CHECK(j.at("active").at("equity_curve").size() == 4);

  const auto csv = equity_csv(reports);
  CHECK(csv.rfind("date,active,cash\n", 0) == 0);
  CHECK(csv.find("start,1,1\n") != std::string::npos);

  const auto svg = equity_svg(reports);
  CHECK(svg.find("<svg") != std::string::npos);
  std::size_t polylines = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
       pos = svg.find("<polyline", pos + 1))
    ++polylines;
  CHECK(polylines == 2);
  CHECK(svg.find("active") != std::string::npos);  // legend labels

  // mismatched axes refuse to render together
  auto shifted = active;
  shifted.erase(shifted.begin());
  StrategyReports bad{{"a", simulate(active, realized)}, {"b", simulate(shifted, realized)}};
  CHECK_THROWS_AS(report_json(bad), DataError);
}
