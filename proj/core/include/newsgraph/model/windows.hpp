#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "newsgraph/ingest/feature_panel.hpp"
#include "newsgraph/model/model_config.hpp"
#include "newsgraph/types.hpp"

namespace newsgraph::model {

// One training/evaluation sample: feature days [start .. start+L] of one
// ticker, labeled with the movement at panel date start+L+1.
struct Window {
  Ticker ticker;
  std::size_t ticker_idx = 0;  // row in the panel
  std::size_t start = 0;       // panel date index of day t
  MovementLabel label = MovementLabel::Neutral;
  Date label_date;
};

// labels[ticker][d] = movement class of the close-to-close return into date
// d, per the thresholds. d = 0 has no prior close and reuses return 0.
std::vector<std::vector<MovementLabel>> build_labels(const ingest::FeaturePanel& panel,
                                                     const Thresholds& thresholds);

// Every (ticker, start) whose label date start+L+1 is still inside the panel:
// ticker-major, start ascending. Throws ConfigError when the panel is too
// short for even one window.
std::vector<Window> make_windows(const ingest::FeaturePanel& panel, const Thresholds& thresholds,
                                 int lookback);

// Date-boundary split: a window trains iff its label date <= split_date.
std::pair<std::vector<Window>, std::vector<Window>> split_windows(const std::vector<Window>& all,
                                                                  Date split_date);

}  // namespace newsgraph::model
