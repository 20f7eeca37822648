#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace newsgraph {

/// Calendar date, stored as days since 1970-01-01. ISO-8601 text form.
class Date {
 public:
  constexpr Date() = default;

  static Date from_ymd(int year, unsigned month, unsigned day);
  static constexpr Date from_serial(std::int32_t serial) { return Date(serial); }

  // Parses "YYYY-MM-DD". Throws std::invalid_argument on malformed input.
  static Date parse(std::string_view iso);

  std::string to_string() const;

  constexpr std::int32_t serial() const { return serial_; }
  std::chrono::weekday weekday() const;
  bool is_weekend() const;
  Date plus_days(int n) const { return Date(serial_ + n); }

  auto operator<=>(const Date&) const = default;

 private:
  explicit constexpr Date(std::int32_t serial) : serial_(serial) {}
  std::int32_t serial_ = 0;
};

}  // namespace newsgraph
