#include "newsgraph/backtest/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "newsgraph/errors.hpp"

namespace newsgraph::backtest {

namespace {

using json = nlohmann::ordered_json;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for write: " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

void check_common_axis(const StrategyReports& strategies) {
  if (strategies.empty()) throw DataError("no strategies to report");
  for (std::size_t i = 1; i < strategies.size(); ++i)
    if (strategies[i].second.dates != strategies[0].second.dates)
      throw DataError("strategies disagree on the date axis");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string report_json(const StrategyReports& strategies) {
  check_common_axis(strategies);
  json root = json::object();
  for (const auto& [name, rep] : strategies) {
    json j;
    j["cumulative_return"] = rep.cumulative_return;
    j["annualized_volatility"] = rep.risk.annualized_volatility;
    if (rep.risk.sharpe)
      j["sharpe"] = *rep.risk.sharpe;
    else
      j["sharpe"] = nullptr;
    j["max_drawdown"] = rep.risk.max_drawdown;
    json dates = json::array();
    for (const auto& d : rep.dates) dates.push_back(d.to_string());
    j["dates"] = std::move(dates);
    j["daily_returns"] = rep.daily_returns;
    j["equity_curve"] = rep.equity_curve;
    root[name] = std::move(j);
  }
  return root.dump(2) + "\n";
}

void write_report_json(const std::filesystem::path& path, const StrategyReports& strategies) {
  write_text(path, report_json(strategies));
}

std::string equity_csv(const StrategyReports& strategies) {
  check_common_axis(strategies);
  std::string out = "date";
  for (const auto& [name, rep] : strategies) {
    (void)rep;
    out += "," + name;
  }
  out += "\n";
  out += "start";
  for (const auto& [name, rep] : strategies) {
    (void)name;
    out += "," + fmt(rep.equity_curve.at(0));
  }
  out += "\n";
  const auto& dates = strategies[0].second.dates;
  for (std::size_t k = 0; k < dates.size(); ++k) {
    out += dates[k].to_string();
    for (const auto& [name, rep] : strategies) {
      (void)name;
      out += "," + fmt(rep.equity_curve.at(k + 1));
    }
    out += "\n";
  }
  return out;
}

void write_equity_csv(const std::filesystem::path& path, const StrategyReports& strategies) {
  write_text(path, equity_csv(strategies));
}

std::string equity_svg(const StrategyReports& strategies) {
  check_common_axis(strategies);
  const double width = 800, height = 420;
  const double left = 64, right = 16, top = 24, bottom = 48;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double lo = 1e300, hi = -1e300;
  std::size_t n_points = 0;
  for (const auto& [name, rep] : strategies) {
    (void)name;
    n_points = std::max(n_points, rep.equity_curve.size());
    for (double e : rep.equity_curve) {
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  }
  if (hi <= lo) {
    hi = lo + 1.0;
    lo -= 0.5;
  } else {
    double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }

  auto x_at = [&](std::size_t i) {
    double f = n_points > 1 ? static_cast<double>(i) / static_cast<double>(n_points - 1) : 0.0;
    return left + f * plot_w;
  };
  auto y_at = [&](double e) { return top + (1.0 - (e - lo) / (hi - lo)) * plot_h; };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  static const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + num(width) + " " +
         num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";
  // frame and horizontal gridlines with equity labels
  for (int g = 0; g <= 4; ++g) {
    double e = lo + (hi - lo) * g / 4.0;
    double y = y_at(e);
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(y) + "\" x2=\"" + num(width - right) +
           "\" y2=\"" + num(y) + "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(y + 4) +
           "\" text-anchor=\"end\">" + num(e) + "</text>\n";
  }
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
         num(height - bottom) + "\" stroke=\"#333333\"/>\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(height - bottom) + "\" x2=\"" +
         num(width - right) + "\" y2=\"" + num(height - bottom) + "\" stroke=\"#333333\"/>\n";

  std::size_t color_i = 0;
  for (const auto& [name, rep] : strategies) {
    const char* color = kColors[color_i % (sizeof(kColors) / sizeof(kColors[0]))];
    std::string points;
    for (std::size_t i = 0; i < rep.equity_curve.size(); ++i) {
      if (!points.empty()) points += ' ';
      points += num(x_at(i)) + "," + num(y_at(rep.equity_curve[i]));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    double ly = top + 16 + 16 * static_cast<double>(color_i);
    svg += "<line x1=\"" + num(left + 12) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
           num(left + 36) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    svg += "<text x=\"" + num(left + 42) + "\" y=\"" + num(ly) + "\">" + name + "</text>\n";
    ++color_i;
  }
  // x labels: first and last date
  if (!strategies[0].second.dates.empty()) {
    svg += "<text x=\"" + num(left) + "\" y=\"" + num(height - bottom + 20) + "\">start</text>\n";
    svg += "<text x=\"" + num(width - right) + "\" y=\"" + num(height - bottom + 20) +
           "\" text-anchor=\"end\">" + strategies[0].second.dates.back().to_string() +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_equity_svg(const std::filesystem::path& path, const StrategyReports& strategies) {
  write_text(path, equity_svg(strategies));
}

}  // namespace newsgraph::backtest
