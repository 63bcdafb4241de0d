#ifndef RWALK_DATE_HPP
#define RWALK_DATE_HPP

#include <charconv>
#include <chrono>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "rwalk/error.hpp"

namespace rwalk {

/// Calendar day. Arithmetic is in whole days.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days d) : days_(d) {}

  static Date from_ymd(int y, unsigned m, unsigned d) {
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                    std::chrono::day{d}};
    if (!ymd.ok()) {
      throw input_error("invalid calendar date " + std::to_string(y) + "-" +
                        std::to_string(m) + "-" + std::to_string(d));
    }
    return Date{std::chrono::sys_days{ymd}};
  }

  /// YYYY-MM-DD
  static Date parse_iso(std::string_view text) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (!parse_fields(text, '-', y, m, d, /*year_first=*/true)) {
      throw input_error("cannot parse ISO-8601 date '" + std::string(text) + "'");
    }
    return from_ymd(y, m, d);
  }

  /// mm/dd/yyyy, leading zeros optional.
  static Date parse_mdy(std::string_view text) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (!parse_fields(text, '/', y, m, d, /*year_first=*/false)) {
      throw input_error("cannot parse mm/dd/yyyy date '" + std::string(text) + "'");
    }
    return from_ymd(y, m, d);
  }

  std::chrono::sys_days sys_days() const { return days_; }
  std::chrono::year_month_day ymd() const { return std::chrono::year_month_day{days_}; }
  int year() const { return static_cast<int>(ymd().year()); }
  unsigned month() const { return static_cast<unsigned>(ymd().month()); }
  unsigned day() const { return static_cast<unsigned>(ymd().day()); }

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
    return buf;
  }

  Date operator+(long n) const { return Date{days_ + std::chrono::days{n}}; }
  Date operator-(long n) const { return Date{days_ - std::chrono::days{n}}; }
  long operator-(Date other) const { return (days_ - other.days_).count(); }

  auto operator<=>(const Date&) const = default;

 private:
  static bool parse_fields(std::string_view text, char sep, int& y, unsigned& m, unsigned& d,
                           bool year_first) {
    const auto a = text.find(sep);
    if (a == std::string_view::npos) return false;
    const auto b = text.find(sep, a + 1);
    if (b == std::string_view::npos) return false;
    auto num = [](std::string_view s, auto& out) {
      if (s.empty()) return false;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      return ec == std::errc{} && p == s.data() + s.size();
    };
    const auto f0 = text.substr(0, a);
    const auto f1 = text.substr(a + 1, b - a - 1);
    const auto f2 = text.substr(b + 1);
    if (year_first) return num(f0, y) && num(f1, m) && num(f2, d);
    return num(f0, m) && num(f1, d) && num(f2, y);
  }

  std::chrono::sys_days days_{};
};

}  // namespace rwalk

#endif  // RWALK_DATE_HPP
