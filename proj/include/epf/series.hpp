#pragma once

#include <chrono>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "epf/errors.hpp"

namespace epf {

using Date = std::chrono::year_month_day;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD).
Date parse_date(std::string_view iso);
std::string format_date(const Date& d);
Date add_days(const Date& d, long n);
long days_between(const Date& from, const Date& to);

/// ISO weekday index, Monday = 1 .. Sunday = 7.
int weekday_index(const Date& d);

/// Easter Sunday for the given Gregorian year (Gauss computus).
Date easter_sunday(int year);

/// Maps a date to the holiday flag. Deterministic for a fixed configuration:
/// fixed (month, day) pairs, optionally Easter Monday, plus extra user dates.
class HolidayCalendar {
 public:
  /// Italian national fixed-date holidays plus Easter Monday.
  static HolidayCalendar italian();

  /// Empty calendar (no holidays at all).
  static HolidayCalendar none();

  /// One ISO date per line; blank lines and lines starting with '#' skipped.
  /// The dates are added on top of the current configuration.
  void add_dates_from_file(const std::filesystem::path& path);

  void add_fixed(unsigned month, unsigned day);
  void add_extra(const Date& d);
  void set_easter_monday(bool enabled) { easter_monday_ = enabled; }

  bool is_holiday(const Date& d) const;

 private:
  std::set<std::pair<unsigned, unsigned>> fixed_;
  std::set<std::chrono::sys_days> extra_;
  bool easter_monday_ = false;
};

/// Day label per the weekly-dummy scheme: 1..7 = Monday..Sunday for
/// non-holidays, 8 for any holiday regardless of weekday.
int day_label(const Date& d, const HolidayCalendar& calendar);

/// Daily-contiguous price observations with per-day labels.
/// Immutable after construction; safe to share across readers.
struct PriceSeries {
  Date start_date{};
  std::vector<double> values;
  std::vector<int> labels;

  /// Builds a series from contiguous daily values, assigning labels.
  /// Throws InsufficientData when fewer than 2 values are given.
  static PriceSeries from_values(const Date& start, std::vector<double> values,
                                 const HolidayCalendar& calendar);

  std::size_t size() const { return values.size(); }
  Date date_at(std::size_t t) const { return add_days(start_date, static_cast<long>(t)); }

  /// Trailing sub-window [begin, begin+length), labels preserved.
  PriceSeries window(std::size_t begin, std::size_t length) const;
};

/// Loads `date,price` CSV (header required, ISO dates, one row per day).
/// Rows are sorted by date before validation. Errors: EmptyInput,
/// ParseError(line), GapError(first missing date).
PriceSeries load_csv(const std::filesystem::path& path, const HolidayCalendar& calendar);

void write_csv(const PriceSeries& series, const std::filesystem::path& path);

/// Trailing moving average with shrinking warm-up: output[t] is the mean of
/// the last min(t+1, window) values ending at t. Same length as the input.
std::vector<double> moving_average(std::span<const double> values, std::size_t window);

}  // namespace epf
