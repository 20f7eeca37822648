#include "newsgraph/ingest/headlines.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "newsgraph/errors.hpp"

namespace newsgraph::ingest {

namespace {

int two_digits(std::string_view s, std::size_t pos) {
  const char a = s[pos], b = s[pos + 1];
  if (a < '0' || a > '9' || b < '0' || b > '9') {
    throw std::invalid_argument("expected two digits at position " + std::to_string(pos) +
                                " of timestamp '" + std::string(s) + "'");
  }
  return (a - '0') * 10 + (b - '0');
}

}  // namespace

LocalTimestamp LocalTimestamp::parse_rfc3339(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS[.frac](Z|±HH:MM)
  if (s.size() < 20) throw std::invalid_argument("timestamp too short: '" + std::string(s) + "'");
  LocalTimestamp ts;
  ts.date = Date::parse(s.substr(0, 10));
  if (s[10] != 'T' && s[10] != 't') {
    throw std::invalid_argument("expected 'T' separator in '" + std::string(s) + "'");
  }
  const int hh = two_digits(s, 11);
  const int mm = two_digits(s, 14);
  const int ss = two_digits(s, 17);
  if (s[13] != ':' || s[16] != ':' || hh > 23 || mm > 59 || ss > 60) {
    throw std::invalid_argument("bad time of day in '" + std::string(s) + "'");
  }
  ts.second_of_day = hh * 3600 + mm * 60 + std::min(ss, 59);

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
  }
  if (pos >= s.size()) {
    throw std::invalid_argument("missing timezone offset in '" + std::string(s) + "'");
  }
  if (s[pos] == 'Z' || s[pos] == 'z') {
    if (pos + 1 != s.size()) {
      throw std::invalid_argument("trailing characters in '" + std::string(s) + "'");
    }
    ts.utc_offset_minutes = 0;
    return ts;
  }
  if ((s[pos] != '+' && s[pos] != '-') || pos + 6 != s.size() || s[pos + 3] != ':') {
    throw std::invalid_argument("bad timezone offset in '" + std::string(s) + "'");
  }
  const int oh = two_digits(s, pos + 1);
  const int om = two_digits(s, pos + 4);
  ts.utc_offset_minutes = (s[pos] == '-' ? -1 : 1) * (oh * 60 + om);
  return ts;
}

std::string LocalTimestamp::to_rfc3339() const {
  char buf[24];
  const int h = second_of_day / 3600, m = (second_of_day / 60) % 60, s = second_of_day % 60;
  const int off = utc_offset_minutes;
  std::snprintf(buf, sizeof(buf), "T%02d:%02d:%02d%c%02d:%02d", h, m, s, off < 0 ? '-' : '+',
                std::abs(off) / 60, std::abs(off) % 60);
  return date.to_string() + buf;
}

std::vector<HeadlineRecord> parse_headlines(std::istream& in, std::string_view source_name) {
  std::vector<HeadlineRecord> records;
  std::set<std::pair<std::string, LocalTimestamp>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw RowError(lineno, "malformed JSON record in " + std::string(source_name));
    }
    if (!j.contains("text") || !j["text"].is_string()) {
      throw RowError(lineno, "missing \"text\" field");
    }
    if (!j.contains("timestamp") || !j["timestamp"].is_string()) {
      throw RowError(lineno, "missing \"timestamp\" field");
    }
    HeadlineRecord rec;
    rec.text = j["text"].get<std::string>();
    if (rec.text.empty()) throw RowError(lineno, "empty headline text");
    try {
      rec.timestamp = LocalTimestamp::parse_rfc3339(j["timestamp"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw RowError(lineno, e.what());
    }
    rec.provider = j.value("provider", std::string{});
    if (j.contains("effective_date") && j["effective_date"].is_string()) {
      try {
        rec.effective_date = Date::parse(j["effective_date"].get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw RowError(lineno, e.what());
      }
    }
    if (seen.emplace(rec.text, rec.timestamp).second) {
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::vector<HeadlineRecord> parse_headlines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open headlines file: " + path.string());
  return parse_headlines(in, path.string());
}

void write_headlines(std::ostream& out, const std::vector<HeadlineRecord>& records) {
  for (const auto& r : records) {
    nlohmann::json j;
    j["text"] = r.text;
    j["timestamp"] = r.timestamp.to_rfc3339();
    j["provider"] = r.provider;
    if (r.effective_date) j["effective_date"] = r.effective_date->to_string();
    out << j.dump() << '\n';
  }
}

void write_headlines(const std::filesystem::path& path, const std::vector<HeadlineRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write headlines file: " + path.string());
  write_headlines(out, records);
}

HeadlineRecord assign_effective_date(const HeadlineRecord& h, const TradingCalendar& cal) {
  if (cal.empty()) throw std::out_of_range("empty trading calendar");
  HeadlineRecord out = h;
  const Date d = h.timestamp.date;
  if (cal.contains(d) && h.timestamp.second_of_day < kCloseSecondOfDay) {
    out.effective_date = d;
  } else {
    out.effective_date = cal.next_after(d);  // throws past the calendar end
  }
  return out;
}

MatchMode match_mode_from_string(std::string_view s) {
  if (s == "ticker") return MatchMode::TickerToken;
  if (s == "name") return MatchMode::CompanyName;
  if (s == "both") return MatchMode::Both;
  if (s == "none") return MatchMode::None;
  throw ConfigError("unknown match mode '" + std::string(s) + "' (ticker|name|both|none)");
}

std::string_view to_string(MatchMode m) {
  switch (m) {
    case MatchMode::TickerToken: return "ticker";
    case MatchMode::CompanyName: return "name";
    case MatchMode::Both: return "both";
    case MatchMode::None: return "none";
  }
  return "?";
}

namespace {

// Case-sensitive whole-token search for the ticker symbol.
bool has_ticker_token(std::string_view text, std::string_view symbol) {
  std::size_t pos = 0;
  while ((pos = text.find(symbol, pos)) != std::string_view::npos) {
    const bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
    const std::size_t end = pos + symbol.size();
    const bool right_ok =
        end >= text.size() || !std::isalnum(static_cast<unsigned char>(text[end]));
    if (left_ok && right_ok) return true;
    pos += 1;
  }
  return false;
}

// Case-insensitive whole-word search; "Apple" must not hit inside "Pineapple".
bool icontains_word(std::string_view haystack, std::string_view needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  const auto eq = [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) ==
           std::tolower(static_cast<unsigned char>(b));
  };
  for (std::size_t pos = 0; pos + needle.size() <= haystack.size(); ++pos) {
    if (!std::equal(needle.begin(), needle.end(), haystack.begin() + pos, eq)) continue;
    const bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(haystack[pos - 1]));
    const std::size_t end = pos + needle.size();
    const bool right_ok =
        end >= haystack.size() || !std::isalnum(static_cast<unsigned char>(haystack[end]));
    if (left_ok && right_ok) return true;
  }
  return false;
}

}  // namespace

bool mentions_company(std::string_view text, const Ticker& ticker, std::string_view company_name,
                      MatchMode mode) {
  switch (mode) {
    case MatchMode::None: return true;
    case MatchMode::TickerToken: return has_ticker_token(text, ticker.str());
    case MatchMode::CompanyName: return icontains_word(text, company_name);
    case MatchMode::Both:
      return has_ticker_token(text, ticker.str()) || icontains_word(text, company_name);
  }
  return false;
}

std::vector<HeadlineRecord> filter_mentioning(const std::vector<HeadlineRecord>& records,
                                              const std::vector<Ticker>& universe,
                                              const std::map<Ticker, std::string>& company_names,
                                              MatchMode mode) {
  if (mode == MatchMode::None) return records;
  std::vector<HeadlineRecord> kept;
  for (const auto& r : records) {
    for (const auto& t : universe) {
      const auto it = company_names.find(t);
      const std::string_view name = it == company_names.end() ? std::string_view{} : it->second;
      if (mentions_company(r.text, t, name, mode)) {
        kept.push_back(r);
        break;
      }
    }
  }
  return kept;
}

}  // namespace newsgraph::ingest
