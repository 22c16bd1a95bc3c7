#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace fxclust {

// Calendar date stored as a serial day count (days since 1970-01-01).
// Only whole days: the data model is daily panels, no intraday timestamps.
class Date {
 public:
  Date() : serial_(0) {}
  explicit Date(std::int32_t serial) : serial_(serial) {}

  static Date from_ymd(int year, int month, int day);

  // Parses strict ISO-8601 "YYYY-MM-DD". Throws Error(MalformedRow) on
  // anything else, including impossible calendar dates.
  static Date parse(const std::string& text);

  std::int32_t serial() const { return serial_; }
  std::string to_string() const;

  auto operator<=>(const Date&) const = default;

 private:
  std::int32_t serial_;
};

}  // namespace fxclust
