#include "newsgraph/backtest/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "newsgraph/errors.hpp"

namespace newsgraph::backtest {

double max_drawdown(const std::vector<double>& equity_curve) {
  double peak = -1.0, worst = 0.0;
  for (double e : equity_curve) {
    if (e > peak) peak = e;
    if (peak > 0.0) {
      double dd = 1.0 - e / peak;
      if (dd > worst) worst = dd;
    }
  }
  return worst;
}

RiskMetrics risk_metrics(const std::vector<double>& daily_returns) {
  const std::size_t n = daily_returns.size();
  if (n < 2) throw std::domain_error("risk metrics need at least two daily returns");

  double mean = 0.0;
  for (double r : daily_returns) mean += r;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double r : daily_returns) ss += (r - mean) * (r - mean);
  double sd = std::sqrt(ss / static_cast<double>(n - 1));

  RiskMetrics m;
  m.annualized_volatility = sd * std::sqrt(kTradingDaysPerYear);
  if (sd > 0.0) m.sharpe = mean / sd * std::sqrt(kTradingDaysPerYear);

  std::vector<double> equity(n + 1);
  equity[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) equity[i + 1] = equity[i] * (1.0 + daily_returns[i]);
  m.max_drawdown = max_drawdown(equity);
  return m;
}

BacktestReport simulate(const std::vector<DailyWeights>& weights,
                        const std::map<Date, std::map<Ticker, double>>& realized,
                        const CostHook& cost) {
  if (weights.empty()) throw DataError("no weight days to simulate");
  BacktestReport rep;
  rep.equity_curve.push_back(1.0);

  const DailyWeights* prev = nullptr;
  static const DailyWeights kFlat{};  // empty book before the first day
  for (const auto& wd : weights) {
    if (!rep.dates.empty() && !(rep.dates.back() < wd.date))
      throw DataError("weight dates must be strictly increasing at " + wd.date.to_string());
    auto day_it = realized.find(wd.date);
    double ret = 0.0;
    for (const auto& [ticker, w] : wd.weights) {
      if (w == 0.0) continue;
      if (day_it == realized.end())
        throw DataError("no realized returns for " + wd.date.to_string());
      auto r_it = day_it->second.find(ticker);
      if (r_it == day_it->second.end())
        throw DataError("no realized return for " + ticker.str() + " on " + wd.date.to_string());
      ret += w * r_it->second;
    }
    if (cost) ret -= cost(prev != nullptr ? *prev : kFlat, wd);
    rep.dates.push_back(wd.date);
    rep.daily_returns.push_back(ret);
    rep.equity_curve.push_back(rep.equity_curve.back() * (1.0 + ret));
    prev = &wd;
  }

  rep.cumulative_return = rep.equity_curve.back() - 1.0;
  if (rep.daily_returns.size() >= 2) {
    rep.risk = risk_metrics(rep.daily_returns);
  } else {
    rep.risk.max_drawdown = max_drawdown(rep.equity_curve);
  }
  return rep;
}

}  // namespace newsgraph::backtest
