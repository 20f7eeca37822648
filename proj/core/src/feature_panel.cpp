#include "newsgraph/ingest/feature_panel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "newsgraph/errors.hpp"

namespace newsgraph::ingest {

namespace {

constexpr int kPanelVersion = 1;

using json = nlohmann::ordered_json;

}  // namespace

std::vector<std::string> default_feature_names() {
  return {"open", "close", "high", "low", "ask", "bid", "log1p_volume", "dividend", "return"};
}

std::size_t FeaturePanel::ticker_index(const Ticker& t) const {
  for (std::size_t i = 0; i < tickers.size(); ++i)
    if (tickers[i] == t) return i;
  throw std::out_of_range("ticker not in panel: " + t.str());
}

std::size_t FeaturePanel::date_index(Date d) const {
  auto it = std::lower_bound(dates.begin(), dates.end(), d);
  if (it == dates.end() || *it != d) throw std::out_of_range("date not in panel: " + d.to_string());
  return static_cast<std::size_t>(it - dates.begin());
}

std::size_t FeaturePanel::train_end_index() const {
  auto it = std::upper_bound(dates.begin(), dates.end(), train_end);
  if (it == dates.begin()) throw std::out_of_range("train_end precedes panel start");
  return static_cast<std::size_t>(it - dates.begin()) - 1;
}

FeaturePanel build_feature_panel(const std::vector<Bar>& bars, const TradingCalendar& cal,
                                 const std::vector<Ticker>& universe, Date train_end,
                                 double std_floor) {
  if (universe.empty()) throw ConfigError("universe is empty");
  if (cal.size() == 0) throw ConfigError("trading calendar is empty");
  if (std_floor <= 0.0) throw ConfigError("std_floor must be positive");

  FeaturePanel p;
  p.tickers = universe;
  p.dates.assign(cal.dates().begin(), cal.dates().end());
  p.feature_names = default_feature_names();
  p.train_end = train_end;
  p.std_floor = std_floor;

  const std::size_t T = p.ticker_count();
  const std::size_t D = p.date_count();
  const std::size_t F = p.feature_count();

  std::map<Ticker, std::size_t> tick_idx;
  for (std::size_t i = 0; i < T; ++i) {
    if (!tick_idx.emplace(p.tickers[i], i).second)
      throw ConfigError("duplicate ticker in universe: " + p.tickers[i].str());
  }

  // bar lookup per (ticker, date); bars outside the universe or calendar are ignored
  std::vector<std::vector<const Bar*>> cell(T, std::vector<const Bar*>(D, nullptr));
  for (const auto& b : bars) {
    auto it = tick_idx.find(b.ticker);
    if (it == tick_idx.end()) continue;
    if (!cal.contains(b.date)) continue;
    std::size_t d = cal.index_of(b.date);
    auto& slot = cell[it->second][d];
    if (slot != nullptr)
      throw DataError("duplicate bar for " + b.ticker.str() + " on " + b.date.to_string());
    slot = &b;
  }

  const std::size_t train_hi = p.train_end_index();  // inclusive
  for (std::size_t t = 0; t < T; ++t) {
    std::size_t n_train = 0;
    for (std::size_t d = 0; d <= train_hi; ++d)
      if (cell[t][d] != nullptr) ++n_train;
    if (n_train < 2)
      throw ConfigError("ticker " + p.tickers[t].str() + " has " + std::to_string(n_train) +
                        " bars on or before " + train_end.to_string() + "; need at least 2");
  }

  p.values.assign(T * D * F, 0.0);
  p.imputed.assign(T * D, 0);
  p.norm_mean.assign(T * F, 0.0);
  p.norm_std.assign(T * F, 0.0);
  p.closes.assign(T * D, 0.0);

  std::vector<double> raw(D * F);
  for (std::size_t t = 0; t < T; ++t) {
    // forward fill, then backfill the head from the first available bar
    const Bar* last = nullptr;
    std::size_t first_d = D;
    for (std::size_t d = 0; d < D; ++d) {
      if (cell[t][d] != nullptr) {
        last = cell[t][d];
        if (first_d == D) first_d = d;
      } else if (last != nullptr) {
        p.imputed[t * D + d] = 1;
      }
    }
    for (std::size_t d = 0; d < first_d; ++d) p.imputed[t * D + d] = 1;

    last = nullptr;
    for (std::size_t d = 0; d < D; ++d) {
      const Bar* b = cell[t][d] != nullptr ? cell[t][d] : (d < first_d ? cell[t][first_d] : last);
      if (cell[t][d] != nullptr) last = b;
      double* r = &raw[d * F];
      r[0] = b->open;
      r[1] = b->close;
      r[2] = b->high;
      r[3] = b->low;
      r[4] = b->ask;
      r[5] = b->bid;
      r[6] = std::log1p(b->volume);
      r[7] = b->dividend;
      p.closes[t * D + d] = b->close;
    }
    raw[0 * F + 8] = 0.0;  // no prior close on the first panel date
    for (std::size_t d = 1; d < D; ++d)
      raw[d * F + 8] = p.closes[t * D + d] / p.closes[t * D + d - 1] - 1.0;

    for (std::size_t f = 0; f < F; ++f) {
      double mean = 0.0;
      const std::size_t n = train_hi + 1;
      for (std::size_t d = 0; d < n; ++d) mean += raw[d * F + f];
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t d = 0; d < n; ++d) {
        double dv = raw[d * F + f] - mean;
        ss += dv * dv;
      }
      double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
      p.norm_mean[t * F + f] = mean;
      p.norm_std[t * F + f] = sd;
      double denom = std::max(sd, std_floor);
      for (std::size_t d = 0; d < D; ++d)
        p.values[(t * D + d) * F + f] = (raw[d * F + f] - mean) / denom;
    }
  }
  return p;
}

void save_panel(const std::filesystem::path& path, const FeaturePanel& panel) {
  json j;
  j["format"] = "newsgraph-panel";
  j["version"] = kPanelVersion;
  j["train_end"] = panel.train_end.to_string();
  j["std_floor"] = panel.std_floor;
  json jt = json::array();
  for (const auto& t : panel.tickers) jt.push_back(t.str());
  j["tickers"] = std::move(jt);
  json jd = json::array();
  for (const auto& d : panel.dates) jd.push_back(d.to_string());
  j["dates"] = std::move(jd);
  j["feature_names"] = panel.feature_names;
  j["mean"] = panel.norm_mean;
  j["std"] = panel.norm_std;
  j["values"] = panel.values;
  j["imputed"] = panel.imputed;
  j["closes"] = panel.closes;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for write: " + path.string());
  out << j.dump() << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

FeaturePanel load_panel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open panel: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SchemaError("panel is not valid JSON: " + std::string(e.what()));
  }
  try {
    if (j.at("format").get<std::string>() != "newsgraph-panel")
      throw SchemaError("not a panel file: " + path.string());
    int ver = j.at("version").get<int>();
    if (ver != kPanelVersion)
      throw SchemaError("unsupported panel version " + std::to_string(ver));

    FeaturePanel p;
    p.train_end = Date::parse(j.at("train_end").get<std::string>());
    p.std_floor = j.at("std_floor").get<double>();
    for (const auto& s : j.at("tickers")) p.tickers.emplace_back(s.get<std::string>());
    for (const auto& s : j.at("dates")) p.dates.push_back(Date::parse(s.get<std::string>()));
    p.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    p.norm_mean = j.at("mean").get<std::vector<double>>();
    p.norm_std = j.at("std").get<std::vector<double>>();
    p.values = j.at("values").get<std::vector<double>>();
    p.imputed = j.at("imputed").get<std::vector<std::uint8_t>>();
    p.closes = j.at("closes").get<std::vector<double>>();

    const std::size_t T = p.ticker_count(), D = p.date_count(), F = p.feature_count();
    if (p.values.size() != T * D * F || p.imputed.size() != T * D ||
        p.norm_mean.size() != T * F || p.norm_std.size() != T * F || p.closes.size() != T * D)
      throw SchemaError("panel array sizes are inconsistent");
    return p;
  } catch (const json::exception& e) {
    throw SchemaError("panel schema error: " + std::string(e.what()));
  }
}

}  // namespace newsgraph::ingest
