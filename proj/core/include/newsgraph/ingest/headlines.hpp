#pragma once

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "newsgraph/calendar.hpp"
#include "newsgraph/date.hpp"
#include "newsgraph/types.hpp"

namespace newsgraph::ingest {

// Market close for effective-date assignment. A headline stamped strictly
// before 16:00:00 exchange-local belongs to that trading day; 16:00:00 and
// later (and non-trading days) roll to the next trading day.
inline constexpr int kCloseSecondOfDay = 16 * 3600;

// RFC-3339 wall-clock timestamp with its recorded UTC offset. The wall-clock
// fields are taken as exchange-local time; the offset is kept for round-trips
// but never used to shift the clock.
struct LocalTimestamp {
  Date date;
  int second_of_day = 0;        // 0 .. 86399
  int utc_offset_minutes = 0;   // e.g. -300 for -05:00

  static LocalTimestamp parse_rfc3339(std::string_view s);
  std::string to_rfc3339() const;

  auto operator<=>(const LocalTimestamp&) const = default;
};

struct HeadlineRecord {
  std::string text;
  LocalTimestamp timestamp;
  std::string provider;
  std::optional<Date> effective_date;

  bool operator==(const HeadlineRecord&) const = default;
};

// Line-delimited JSON {"text", "timestamp", "provider"[, "effective_date"]}.
// Duplicate (text, timestamp) pairs collapse to the first occurrence.
// Malformed lines and missing timezone offsets raise RowError.
std::vector<HeadlineRecord> parse_headlines(std::istream& in,
                                            std::string_view source_name = "<stream>");
std::vector<HeadlineRecord> parse_headlines(const std::filesystem::path& path);

void write_headlines(std::ostream& out, const std::vector<HeadlineRecord>& records);
void write_headlines(const std::filesystem::path& path, const std::vector<HeadlineRecord>& records);

// 16:00 alignment. Throws std::out_of_range when the timestamp lands past the
// final calendar date.
HeadlineRecord assign_effective_date(const HeadlineRecord& h, const TradingCalendar& cal);

// Heuristic company-mention matching for headline filtering.
enum class MatchMode { TickerToken, CompanyName, Both, None };

MatchMode match_mode_from_string(std::string_view s);
std::string_view to_string(MatchMode m);

bool mentions_company(std::string_view text, const Ticker& ticker, std::string_view company_name,
                      MatchMode mode);

// Keeps records mentioning at least one universe member (None keeps all).
std::vector<HeadlineRecord> filter_mentioning(const std::vector<HeadlineRecord>& records,
                                              const std::vector<Ticker>& universe,
                                              const std::map<Ticker, std::string>& company_names,
                                              MatchMode mode);

}  // namespace newsgraph::ingest
