#include "newsgraph/model/windows.hpp"

#include "newsgraph/errors.hpp"
#include "newsgraph/labeling.hpp"

namespace newsgraph::model {

std::vector<std::vector<MovementLabel>> build_labels(const ingest::FeaturePanel& panel,
                                                     const Thresholds& thresholds) {
  const std::size_t T = panel.ticker_count(), D = panel.date_count();
  std::vector<std::vector<MovementLabel>> labels(T, std::vector<MovementLabel>(D));
  for (std::size_t t = 0; t < T; ++t) {
    labels[t][0] = label_movement(0.0, thresholds);
    for (std::size_t d = 1; d < D; ++d) {
      double r = compute_return(panel.close_at(t, d), panel.close_at(t, d - 1));
      labels[t][d] = label_movement(r, thresholds);
    }
  }
  return labels;
}

std::vector<Window> make_windows(const ingest::FeaturePanel& panel, const Thresholds& thresholds,
                                 int lookback) {
  if (lookback < 2) throw ConfigError("lookback must be >= 2");
  const std::size_t D = panel.date_count();
  const std::size_t L = static_cast<std::size_t>(lookback);
  if (D < L + 2)
    throw ConfigError("panel has " + std::to_string(D) + " dates; lookback " +
                      std::to_string(lookback) + " needs at least " + std::to_string(L + 2));

  auto labels = build_labels(panel, thresholds);
  std::vector<Window> out;
  out.reserve(panel.ticker_count() * (D - L - 1));
  for (std::size_t t = 0; t < panel.ticker_count(); ++t) {
    for (std::size_t start = 0; start + L + 1 < D; ++start) {
      Window w;
      w.ticker = panel.tickers[t];
      w.ticker_idx = t;
      w.start = start;
      w.label = labels[t][start + L + 1];
      w.label_date = panel.dates[start + L + 1];
      out.push_back(w);
    }
  }
  return out;
}

std::pair<std::vector<Window>, std::vector<Window>> split_windows(const std::vector<Window>& all,
                                                                  Date split_date) {
  std::pair<std::vector<Window>, std::vector<Window>> out;
  for (const auto& w : all)
    (w.label_date <= split_date ? out.first : out.second).push_back(w);
  return out;
}

}  // namespace newsgraph::model
