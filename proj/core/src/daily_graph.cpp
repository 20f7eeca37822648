#include "newsgraph/infer/daily_graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "newsgraph/errors.hpp"

namespace newsgraph::infer {

namespace {
using json = nlohmann::ordered_json;
}

std::vector<Ticker> DailyGraph::affected() const {
  std::vector<Ticker> out;
  out.reserve(sentiments.size());
  for (const auto& [t, s] : sentiments) out.push_back(t);
  return out;
}

bool DailyGraph::has_edge(const Ticker& a, const Ticker& b) const {
  if (a == b) return false;
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  return std::binary_search(edges.begin(), edges.end(), key);
}

DailyGraph build_daily_graph(const AffectedSet& affected, const std::vector<Ticker>& universe) {
  std::set<Ticker> universe_set(universe.begin(), universe.end());
  DailyGraph g;
  g.date = affected.date;
  g.nodes = universe;
  for (const auto& [t, s] : affected.entries) {
    if (universe_set.count(t) == 0)
      throw std::domain_error("affected ticker " + t.str() + " is not in the universe");
    g.sentiments.emplace(t, s);  // duplicate tickers keep the first sentiment
  }
  std::vector<Ticker> aff = g.affected();  // sorted, unique
  for (std::size_t i = 0; i < aff.size(); ++i)
    for (std::size_t j = i + 1; j < aff.size(); ++j) g.edges.emplace_back(aff[i], aff[j]);
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<std::vector<int>> adjacency(const DailyGraph& g, const std::vector<Ticker>& order) {
  std::map<Ticker, int> index;
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(order.size());
  for (const auto& [a, b] : g.edges) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end())
      throw std::out_of_range("edge endpoint not in ordering: " + a.str() + "-" + b.str());
    adj[ia->second].push_back(ib->second);
    adj[ib->second].push_back(ia->second);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

void save_graphs(const std::filesystem::path& path, const std::vector<DailyGraph>& graphs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for write: " + path.string());
  for (const auto& g : graphs) {
    json j;
    j["date"] = g.date.to_string();
    json aff = json::array();
    for (const auto& t : g.affected()) aff.push_back(t.str());
    j["affected"] = std::move(aff);
    json sen = json::object();
    for (const auto& [t, s] : g.sentiments) sen[t.str()] = std::string(to_string(s));
    j["sentiments"] = std::move(sen);
    json edges = json::array();
    for (const auto& [a, b] : g.edges) edges.push_back(json::array({a.str(), b.str()}));
    j["edges"] = std::move(edges);
    out << j.dump() << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<DailyGraph> load_graphs(const std::filesystem::path& path,
                                    const std::vector<Ticker>& universe) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open graphs: " + path.string());
  std::set<Ticker> universe_set(universe.begin(), universe.end());

  std::vector<DailyGraph> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      DailyGraph g;
      g.date = Date::parse(j.at("date").get<std::string>());
      g.nodes = universe;
      for (const auto& [name, val] : j.at("sentiments").items()) {
        Ticker t(name);
        if (universe_set.count(t) == 0)
          throw DataError("ticker " + name + " is not in the universe");
        g.sentiments.emplace(t, sentiment_from_string(val.get<std::string>()));
      }
      for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw DataError("edge is not a pair");
        Ticker a(e[0].get<std::string>()), b(e[1].get<std::string>());
        if (a == b) throw DataError("self-loop on " + a.str());
        if (g.sentiments.count(a) == 0 || g.sentiments.count(b) == 0)
          throw DataError("edge endpoint is not an affected ticker");
        g.edges.emplace_back(std::min(a, b), std::max(a, b));
      }
      std::sort(g.edges.begin(), g.edges.end());
      g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
      out.push_back(std::move(g));
    } catch (const json::exception& e) {
      throw RowError(line_no, std::string("bad graph line: ") + e.what());
    } catch (const std::exception& e) {
      throw RowError(line_no, e.what());
    }
  }
  return out;
}

}  // namespace newsgraph::infer
