// date.hpp
// Calendar date labels for price panels. Dates are labels only; no
// trading-calendar arithmetic happens anywhere in the library.

#pragma once

#include <compare>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace fragnet {

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  auto operator<=>(const Date&) const = default;

  static bool leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  }

  static int days_in_month(int y, int m) {
    static constexpr int lengths[12] = {31, 28, 31, 30, 31, 30,
                                        31, 31, 30, 31, 30, 31};
    if (m == 2 && leap_year(y)) return 29;
    return lengths[m - 1];
  }

  // Parses strict ISO-8601 "YYYY-MM-DD". Throws std::invalid_argument on
  // anything else, including calendar-invalid dates.
  static Date parse(const std::string& text) {
    auto fail = [&]() -> Date {
      throw std::invalid_argument("unparseable date: '" + text + "'");
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return fail();
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
      if (text[i] < '0' || text[i] > '9') return fail();
    Date d;
    d.year = std::stoi(text.substr(0, 4));
    d.month = std::stoi(text.substr(5, 2));
    d.day = std::stoi(text.substr(8, 2));
    if (d.month < 1 || d.month > 12) return fail();
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return fail();
    return d;
  }

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
  }
};

}  // namespace fragnet
