#include "newsgraph/backtest/portfolio.hpp"

#include "newsgraph/errors.hpp"

namespace newsgraph::backtest {

namespace {

DailyWeights make_weights(Date date, const std::vector<std::pair<Ticker, MovementLabel>>& preds,
                          double up_weight, double down_weight) {
  DailyWeights out;
  out.date = date;
  for (const auto& [ticker, label] : preds) {
    double w = label == MovementLabel::Up ? up_weight
               : label == MovementLabel::Down ? down_weight
                                              : 0.0;
    if (!out.weights.emplace(ticker, w).second)
      throw DataError("duplicate prediction for " + ticker.str() + " on " + date.to_string());
  }
  return out;
}

std::pair<std::size_t, std::size_t> side_counts(
    const std::vector<std::pair<Ticker, MovementLabel>>& preds) {
  std::size_t up = 0, down = 0;
  for (const auto& [ticker, label] : preds) {
    (void)ticker;
    if (label == MovementLabel::Up) ++up;
    if (label == MovementLabel::Down) ++down;
  }
  return {up, down};
}

}  // namespace

DailyWeights long_only_weights(Date date,
                               const std::vector<std::pair<Ticker, MovementLabel>>& preds) {
  auto [up, down] = side_counts(preds);
  (void)down;
  return make_weights(date, preds, up > 0 ? 1.0 / static_cast<double>(up) : 0.0, 0.0);
}

DailyWeights long_short_weights(Date date,
                                const std::vector<std::pair<Ticker, MovementLabel>>& preds) {
  auto [up, down] = side_counts(preds);
  return make_weights(date, preds, up > 0 ? 1.0 / static_cast<double>(up) : 0.0,
                      down > 0 ? -1.0 / static_cast<double>(down) : 0.0);
}

}  // namespace newsgraph::backtest
