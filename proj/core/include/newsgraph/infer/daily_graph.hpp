#pragma once

#include <filesystem>
#include <map>
#include <utility>
#include <vector>

#include "newsgraph/date.hpp"
#include "newsgraph/infer/affected.hpp"
#include "newsgraph/types.hpp"

namespace newsgraph::infer {

// One day's relation graph over the whole universe: affected tickers form a
// clique, everyone else stays isolated. Edges are stored once with
// first < second, sorted; sentiments tag the affected tickers but are not
// consumed by the model.
struct DailyGraph {
  Date date;
  std::vector<Ticker> nodes;
  std::vector<std::pair<Ticker, Ticker>> edges;
  std::map<Ticker, Sentiment> sentiments;

  std::vector<Ticker> affected() const;  // keys of sentiments, ascending
  bool has_edge(const Ticker& a, const Ticker& b) const;
  std::size_t edge_count() const { return edges.size(); }
};

// Throws std::domain_error when an affected ticker is outside the universe.
DailyGraph build_daily_graph(const AffectedSet& affected, const std::vector<Ticker>& universe);

// Neighbor index lists under the given ticker ordering (ascending indices).
// Throws std::out_of_range when an edge endpoint is missing from `order`.
std::vector<std::vector<int>> adjacency(const DailyGraph& g, const std::vector<Ticker>& order);

// Line-delimited JSON, one graph per line:
// {"date": ..., "affected": [...], "sentiments": {...}, "edges": [[a,b], ...]}
void save_graphs(const std::filesystem::path& path, const std::vector<DailyGraph>& graphs);
std::vector<DailyGraph> load_graphs(const std::filesystem::path& path,
                                    const std::vector<Ticker>& universe);

}  // namespace newsgraph::infer
