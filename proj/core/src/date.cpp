#include "newsgraph/date.hpp"

#include <cstdio>
#include <stdexcept>

namespace newsgraph {

namespace {

using days = std::chrono::days;
using sys_days = std::chrono::sys_days;

int digit(char c) {
  if (c < '0' || c > '9') throw std::invalid_argument(std::string("bad digit in date: '") + c + "'");
  return c - '0';
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    throw std::invalid_argument("invalid calendar date " + std::to_string(year) + "-" +
                                std::to_string(month) + "-" + std::to_string(day));
  }
  return Date(static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count()));
}

Date Date::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
    throw std::invalid_argument("expected YYYY-MM-DD, got '" + std::string(iso) + "'");
  }
  const int y = digit(iso[0]) * 1000 + digit(iso[1]) * 100 + digit(iso[2]) * 10 + digit(iso[3]);
  const unsigned m = static_cast<unsigned>(digit(iso[5]) * 10 + digit(iso[6]));
  const unsigned d = static_cast<unsigned>(digit(iso[8]) * 10 + digit(iso[9]));
  return from_ymd(y, m, d);
}

std::string Date::to_string() const {
  const std::chrono::year_month_day ymd{sys_days{days{serial_}}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::chrono::weekday Date::weekday() const { return std::chrono::weekday{sys_days{days{serial_}}}; }

bool Date::is_weekend() const {
  const auto wd = weekday();
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

}  // namespace newsgraph
