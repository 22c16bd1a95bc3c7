#include "fxclust/date.hpp"

#include <chrono>
#include <cstdio>

#include "fxclust/error.hpp"

namespace fxclust {

Date Date::from_ymd(int year, int month, int day) {
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{year}, std::chrono::month{unsigned(month)},
                     std::chrono::day{unsigned(day)}};
  if (!ymd.ok()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "invalid calendar date %04d-%02d-%02d", year,
                  month, day);
    throw Error(ErrorCode::MalformedRow, buf);
  }
  return Date(static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count()));
}

Date Date::parse(const std::string& text) {
  int y = 0, m = 0, d = 0;
  char trailing = 0;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &trailing) != 3 ||
      text.size() != 10) {
    throw Error(ErrorCode::MalformedRow, "expected ISO date YYYY-MM-DD, got '" +
                                             text + "'");
  }
  return from_ymd(y, m, d);
}

std::string Date::to_string() const {
  using namespace std::chrono;
  year_month_day ymd{sys_days{days{serial_}}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::DuplicateDate: return "DuplicateDate";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::TooFewDates: return "TooFewDates";
    case ErrorCode::OrientationUnknown: return "OrientationUnknown";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonPositiveBinWidth: return "NonPositiveBinWidth";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::UndefinedKL: return "UndefinedKL";
    case ErrorCode::NonPositiveKurtosis: return "NonPositiveKurtosis";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::DegenerateHeights: return "DegenerateHeights";
  }
  return "Error";
}

}  // namespace fxclust
