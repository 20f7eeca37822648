#include "newsgraph/ingest/market_csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "newsgraph/errors.hpp"
#include "newsgraph/num_format.hpp"

namespace newsgraph::ingest {

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view s, std::size_t line, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw RowError(line, std::string("unparseable ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::string format_number(double v) { return format_double(v); }

}  // namespace

std::vector<Bar> parse_market_csv(std::istream& in, std::string_view source_name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError("empty market file " + std::string(source_name));
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kMarketCsvHeader) {
    throw SchemaError("unexpected market CSV header in " + std::string(source_name) + ": got '" +
                      line + "', want '" + std::string(kMarketCsvHeader) + "'");
  }

  std::vector<Bar> bars;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 10) {
      throw RowError(lineno, "expected 10 columns, got " + std::to_string(fields.size()));
    }
    Bar bar;
    try {
      bar.ticker = Ticker(std::string(fields[0]));
      bar.date = Date::parse(fields[1]);
    } catch (const std::invalid_argument& e) {
      throw RowError(lineno, e.what());
    }
    bar.open = parse_number(fields[2], lineno, "open");
    bar.close = parse_number(fields[3], lineno, "close");
    bar.high = parse_number(fields[4], lineno, "high");
    bar.low = parse_number(fields[5], lineno, "low");
    bar.ask = parse_number(fields[6], lineno, "ask");
    bar.bid = parse_number(fields[7], lineno, "bid");
    bar.volume = parse_number(fields[8], lineno, "volume");
    bar.dividend = parse_number(fields[9], lineno, "dividend");
    try {
      bar.validate();
    } catch (const std::invalid_argument& e) {
      throw RowError(lineno, e.what());
    }
    bars.push_back(std::move(bar));
  }
  return bars;
}

std::vector<Bar> parse_market_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open market file: " + path.string());
  return parse_market_csv(in, path.string());
}

void write_market_csv(std::ostream& out, const std::vector<Bar>& bars) {
  out << kMarketCsvHeader << '\n';
  for (const auto& b : bars) {
    out << b.ticker.str() << ',' << b.date.to_string() << ',' << format_number(b.open) << ','
        << format_number(b.close) << ',' << format_number(b.high) << ',' << format_number(b.low)
        << ',' << format_number(b.ask) << ',' << format_number(b.bid) << ','
        << format_number(b.volume) << ',' << format_number(b.dividend) << '\n';
  }
}

void write_market_csv(const std::filesystem::path& path, const std::vector<Bar>& bars) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write market file: " + path.string());
  write_market_csv(out, bars);
}

}  // namespace newsgraph::ingest
