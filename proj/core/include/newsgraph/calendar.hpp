#pragma once

#include <cstddef>
#include <vector>

#include "newsgraph/date.hpp"
#include "newsgraph/types.hpp"

namespace newsgraph {

// Strictly increasing set of trading dates. Built from ingested market data
// rather than an external holiday source.
class TradingCalendar {
 public:
  TradingCalendar() = default;
  explicit TradingCalendar(std::vector<Date> dates);  // sorts and dedups

  static TradingCalendar from_bars(const std::vector<Bar>& bars);

  bool empty() const { return dates_.empty(); }
  std::size_t size() const { return dates_.size(); }
  const std::vector<Date>& dates() const { return dates_; }

  bool contains(Date d) const;

  // Index of a member date; throws std::out_of_range if absent.
  std::size_t index_of(Date d) const;

  Date first() const;
  Date last() const;

  // Smallest member strictly greater than d. Throws std::out_of_range when no
  // such date exists (d at or beyond the last calendar date).
  Date next_after(Date d) const;

  // Largest member strictly less than d; throws std::out_of_range at the front.
  Date prev_before(Date d) const;

 private:
  std::vector<Date> dates_;
};

}  // namespace newsgraph
