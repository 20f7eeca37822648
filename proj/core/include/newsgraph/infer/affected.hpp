#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "newsgraph/date.hpp"
#include "newsgraph/types.hpp"

namespace newsgraph::infer {

// Company-name -> ticker lookup used when a response names companies instead
// of symbols. Lookup is case-insensitive, ignores ./,/' characters, and
// tolerates one trailing legal-form token (Inc, Corp, Company, ...).
class NameTable {
 public:
  NameTable() = default;
  void add(const std::string& name, const Ticker& ticker);
  std::optional<Ticker> resolve(const std::string& raw) const;

  // Dow Jones Industrial Average constituents (as composed September 2020).
  static const NameTable& dow30();

 private:
  std::vector<std::pair<std::string, Ticker>> by_norm_;  // normalized name -> ticker
};

// Tickers matching NameTable::dow30(), in alphabetical order.
std::vector<Ticker> dow30_universe();

// Parsed provider output for one day.
struct AffectedSet {
  Date date;
  std::vector<std::pair<Ticker, Sentiment>> entries;  // unique tickers, first occurrence wins
  std::string raw_response;
};

// Finds the first balanced JSON object in `raw` carrying the key
// "Affected Companies" and maps its company -> sentiment entries onto the
// universe. Company identifiers resolve by exact (case-insensitive) ticker
// match first, then through `names`. Unknown companies, tickers outside the
// universe, and unknown sentiment strings are dropped with a logged warning.
// Throws ParseError (carrying `raw`) when no such object exists.
std::vector<std::pair<Ticker, Sentiment>> parse_affected(const std::string& raw,
                                                         const std::vector<Ticker>& universe,
                                                         const NameTable& names = NameTable::dow30());

}  // namespace newsgraph::infer
