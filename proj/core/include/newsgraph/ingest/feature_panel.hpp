#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "newsgraph/calendar.hpp"
#include "newsgraph/types.hpp"

namespace newsgraph::ingest {

inline constexpr double kDefaultStdFloor = 1e-8;

// The nine per-day inputs: raw quote fields, log1p volume, dividend, and the
// close-to-close daily return.
std::vector<std::string> default_feature_names();

// Standardized [ticker x date x feature] block. Normalization statistics are
// estimated over dates <= train_end only, so nothing after the training
// boundary can leak into the scaling. Missing (ticker, date) cells are
// forward-filled from the last bar (head gaps take the first bar) and flagged
// in the imputed mask. Raw forward-filled closes ride along for labeling and
// backtesting.
struct FeaturePanel {
  std::vector<Ticker> tickers;
  std::vector<Date> dates;
  std::vector<std::string> feature_names;
  Date train_end;
  double std_floor = kDefaultStdFloor;

  std::vector<double> values;        // [ticker][date][feature], standardized
  std::vector<std::uint8_t> imputed; // [ticker][date]
  std::vector<double> norm_mean;     // [ticker][feature]
  std::vector<double> norm_std;      // [ticker][feature], pre-floor sample stdev
  std::vector<double> closes;        // [ticker][date], raw filled close

  std::size_t ticker_count() const { return tickers.size(); }
  std::size_t date_count() const { return dates.size(); }
  std::size_t feature_count() const { return feature_names.size(); }

  double at(std::size_t t, std::size_t d, std::size_t f) const {
    return values[(t * date_count() + d) * feature_count() + f];
  }
  bool is_imputed(std::size_t t, std::size_t d) const { return imputed[t * date_count() + d] != 0; }
  double close_at(std::size_t t, std::size_t d) const { return closes[t * date_count() + d]; }

  std::size_t ticker_index(const Ticker& t) const;  // throws std::out_of_range
  std::size_t date_index(Date d) const;             // throws std::out_of_range

  // Index of the last date <= train_end; throws if train_end precedes all dates.
  std::size_t train_end_index() const;
};

// Throws ConfigError when a universe ticker has fewer than two bars dated at
// or before train_end.
FeaturePanel build_feature_panel(const std::vector<Bar>& bars, const TradingCalendar& cal,
                                 const std::vector<Ticker>& universe, Date train_end,
                                 double std_floor = kDefaultStdFloor);

void save_panel(const std::filesystem::path& path, const FeaturePanel& panel);
FeaturePanel load_panel(const std::filesystem::path& path);

}  // namespace newsgraph::ingest
