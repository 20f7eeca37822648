#pragma once

#include <map>
#include <utility>
#include <vector>

#include "newsgraph/date.hpp"
#include "newsgraph/types.hpp"

namespace newsgraph::backtest {

// Portfolio weights formed at date's close from predictions targeting the
// next trading day; applied over the date -> next-close return.
struct DailyWeights {
  Date date;
  std::map<Ticker, double> weights;  // every input ticker appears, zeros included
};

// Equal weight 1/k over tickers predicted Up; all zeros (cash) when none.
// Throws DataError on a duplicated ticker.
DailyWeights long_only_weights(Date date,
                               const std::vector<std::pair<Ticker, MovementLabel>>& preds);

// +1/k_up on Up, -1/k_down on Down; an empty side contributes nothing.
DailyWeights long_short_weights(Date date,
                                const std::vector<std::pair<Ticker, MovementLabel>>& preds);

}  // namespace newsgraph::backtest
