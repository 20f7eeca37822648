#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "newsgraph/backtest/simulate.hpp"

namespace newsgraph::backtest {

// Named strategy results rendered side by side (e.g. long_only, long_short).
using StrategyReports = std::vector<std::pair<std::string, BacktestReport>>;

// Deterministic pretty JSON: metrics plus the full daily series per strategy.
// A zero-stdev Sharpe serializes as null.
std::string report_json(const StrategyReports& strategies);
void write_report_json(const std::filesystem::path& path, const StrategyReports& strategies);

// Equity curves as CSV: header "date,<name>..."; first row "start" holds the
// initial 1.0 equity. All strategies must share the same date axis.
std::string equity_csv(const StrategyReports& strategies);
void write_equity_csv(const std::filesystem::path& path, const StrategyReports& strategies);

// Static SVG line chart overlaying the equity curves.
std::string equity_svg(const StrategyReports& strategies);
void write_equity_svg(const std::filesystem::path& path, const StrategyReports& strategies);

}  // namespace newsgraph::backtest
