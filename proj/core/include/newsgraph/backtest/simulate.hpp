#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "newsgraph/backtest/portfolio.hpp"
#include "newsgraph/date.hpp"

namespace newsgraph::backtest {

inline constexpr double kTradingDaysPerYear = 252.0;

struct RiskMetrics {
  double annualized_volatility = 0.0;
  std::optional<double> sharpe;  // empty when the return stdev is zero
  double max_drawdown = 0.0;
};

struct BacktestReport {
  std::vector<Date> dates;            // one per weighted day, ascending
  std::vector<double> daily_returns;  // portfolio return over date -> next close
  std::vector<double> equity_curve;   // dates.size() + 1 points, starts at 1.0
  double cumulative_return = 0.0;
  RiskMetrics risk;
};

// Largest peak-to-trough decline of an equity path, as a fraction of the
// peak: max over time of 1 - equity/running_peak. 0 for flat or rising paths.
double max_drawdown(const std::vector<double>& equity_curve);

// Sample-stdev volatility and Sharpe, both annualized by sqrt(252), risk-free
// rate 0; drawdown of the compounded equity path. Throws std::domain_error
// for fewer than two returns.
RiskMetrics risk_metrics(const std::vector<double>& daily_returns);

// Per-day charge subtracted from the portfolio return; sees the previous and
// current weights so turnover-based costs are expressible. Default: none.
using CostHook = std::function<double(const DailyWeights& prev, const DailyWeights& cur)>;

// realized[date][ticker] = close-to-close return from date to the next
// trading day. Throws DataError when a nonzero-weight ticker has no realized
// return, or when weight dates are not strictly increasing.
BacktestReport simulate(const std::vector<DailyWeights>& weights,
                        const std::map<Date, std::map<Ticker, double>>& realized,
                        const CostHook& cost = {});

}  // namespace newsgraph::backtest
