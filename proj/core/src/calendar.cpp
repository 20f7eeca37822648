#include "newsgraph/calendar.hpp"

#include <algorithm>
#include <stdexcept>

namespace newsgraph {

TradingCalendar::TradingCalendar(std::vector<Date> dates) : dates_(std::move(dates)) {
  std::sort(dates_.begin(), dates_.end());
  dates_.erase(std::unique(dates_.begin(), dates_.end()), dates_.end());
}

TradingCalendar TradingCalendar::from_bars(const std::vector<Bar>& bars) {
  std::vector<Date> dates;
  dates.reserve(bars.size());
  for (const auto& b : bars) dates.push_back(b.date);
  return TradingCalendar(std::move(dates));
}

bool TradingCalendar::contains(Date d) const {
  return std::binary_search(dates_.begin(), dates_.end(), d);
}

std::size_t TradingCalendar::index_of(Date d) const {
  const auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
  if (it == dates_.end() || *it != d) {
    throw std::out_of_range("date " + d.to_string() + " is not a trading day");
  }
  return static_cast<std::size_t>(it - dates_.begin());
}

Date TradingCalendar::first() const {
  if (dates_.empty()) throw std::out_of_range("empty trading calendar");
  return dates_.front();
}

Date TradingCalendar::last() const {
  if (dates_.empty()) throw std::out_of_range("empty trading calendar");
  return dates_.back();
}

Date TradingCalendar::next_after(Date d) const {
  const auto it = std::upper_bound(dates_.begin(), dates_.end(), d);
  if (it == dates_.end()) {
    throw std::out_of_range("no trading day after " + d.to_string());
  }
  return *it;
}

Date TradingCalendar::prev_before(Date d) const {
  const auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
  if (it == dates_.begin()) {
    throw std::out_of_range("no trading day before " + d.to_string());
  }
  return *(it - 1);
}

}  // namespace newsgraph
