#include "epf/series.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

namespace epf {

namespace {

std::chrono::sys_days to_sys(const Date& d) { return std::chrono::sys_days(d); }

bool parse_unsigned(std::string_view s, unsigned& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Date parse_date(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
    throw ParseError("expected ISO date YYYY-MM-DD, got '" + std::string(iso) + "'", 0);
  unsigned y = 0, m = 0, d = 0;
  if (!parse_unsigned(iso.substr(0, 4), y) || !parse_unsigned(iso.substr(5, 2), m) ||
      !parse_unsigned(iso.substr(8, 2), d))
    throw ParseError("bad date '" + std::string(iso) + "'", 0);
  const Date date{std::chrono::year(static_cast<int>(y)), std::chrono::month(m),
                  std::chrono::day(d)};
  if (!date.ok()) throw ParseError("invalid calendar date '" + std::string(iso) + "'", 0);
  return date;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

Date add_days(const Date& d, long n) {
  return Date(to_sys(d) + std::chrono::days(n));
}

long days_between(const Date& from, const Date& to) {
  return (to_sys(to) - to_sys(from)).count();
}

int weekday_index(const Date& d) {
  const std::chrono::weekday wd(to_sys(d));
  return static_cast<int>(wd.iso_encoding());  // Mon=1..Sun=7
}

Date easter_sunday(int year) {
  // Anonymous Gregorian computus.
  const int a = year % 19;
  const int b = year / 100;
  const int c = year % 100;
  const int d = b / 4;
  const int e = b % 4;
  const int f = (b + 8) / 25;
  const int g = (b - f + 1) / 3;
  const int h = (19 * a + b - d - g + 15) % 30;
  const int i = c / 4;
  const int k = c % 4;
  const int l = (32 + 2 * e + 2 * i - h - k) % 7;
  const int m = (a + 11 * h + 22 * l) / 451;
  const int month = (h + l - 7 * m + 114) / 31;
  const int day = ((h + l - 7 * m + 114) % 31) + 1;
  return Date{std::chrono::year(year), std::chrono::month(static_cast<unsigned>(month)),
              std::chrono::day(static_cast<unsigned>(day))};
}

HolidayCalendar HolidayCalendar::italian() {
  HolidayCalendar cal;
  // National fixed-date holidays.
  for (auto [m, d] : {std::pair<unsigned, unsigned>{1, 1},
                      {1, 6},
                      {4, 25},
                      {5, 1},
                      {6, 2},
                      {8, 15},
                      {11, 1},
                      {12, 8},
                      {12, 25},
                      {12, 26}})
    cal.add_fixed(m, d);
  cal.set_easter_monday(true);
  return cal;
}

HolidayCalendar HolidayCalendar::none() { return HolidayCalendar{}; }

void HolidayCalendar::add_fixed(unsigned month, unsigned day) { fixed_.insert({month, day}); }

void HolidayCalendar::add_extra(const Date& d) { extra_.insert(to_sys(d)); }

void HolidayCalendar::add_dates_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open holiday file " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    try {
      add_extra(parse_date(line));
    } catch (const ParseError&) {
      throw ParseError("bad holiday date '" + line + "'", lineno);
    }
  }
}

bool HolidayCalendar::is_holiday(const Date& d) const {
  if (fixed_.count({static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day())})) return true;
  if (extra_.count(to_sys(d))) return true;
  if (easter_monday_) {
    const Date easter = easter_sunday(static_cast<int>(d.year()));
    if (to_sys(d) == to_sys(easter) + std::chrono::days(1)) return true;
  }
  return false;
}

int day_label(const Date& d, const HolidayCalendar& calendar) {
  if (calendar.is_holiday(d)) return 8;
  return weekday_index(d);
}

PriceSeries PriceSeries::from_values(const Date& start, std::vector<double> values,
                                     const HolidayCalendar& calendar) {
  if (values.size() < 2) throw InsufficientData("price series needs at least 2 observations");
  PriceSeries s;
  s.start_date = start;
  s.values = std::move(values);
  s.labels.reserve(s.values.size());
  for (std::size_t t = 0; t < s.values.size(); ++t)
    s.labels.push_back(day_label(add_days(start, static_cast<long>(t)), calendar));
  return s;
}

PriceSeries PriceSeries::window(std::size_t begin, std::size_t length) const {
  if (begin + length > size()) throw InvalidWindow("window exceeds series length");
  if (length < 2) throw InsufficientData("window needs at least 2 observations");
  PriceSeries s;
  s.start_date = date_at(begin);
  s.values.assign(values.begin() + static_cast<std::ptrdiff_t>(begin),
                  values.begin() + static_cast<std::ptrdiff_t>(begin + length));
  s.labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(begin),
                  labels.begin() + static_cast<std::ptrdiff_t>(begin + length));
  return s;
}

PriceSeries load_csv(const std::filesystem::path& path, const HolidayCalendar& calendar) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());

  std::string line;
  std::size_t lineno = 0;
  std::vector<std::pair<std::chrono::sys_days, double>> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "date,price") throw ParseError("expected header 'date,price'", lineno);
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("missing comma", lineno);
    Date date{};
    try {
      date = parse_date(std::string_view(line).substr(0, comma));
    } catch (const ParseError&) {
      throw ParseError("bad date field '" + line.substr(0, comma) + "'", lineno);
    }
    const std::string num = line.substr(comma + 1);
    char* endp = nullptr;
    const double price = std::strtod(num.c_str(), &endp);
    if (endp == num.c_str() || *endp != '\0')
      throw ParseError("bad price field '" + num + "'", lineno);
    rows.emplace_back(std::chrono::sys_days(date), price);
  }
  if (rows.empty()) throw EmptyInput("no data rows in " + path.string());

  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto expected = rows[i - 1].first + std::chrono::days(1);
    if (rows[i].first == rows[i - 1].first)
      throw ParseError("duplicate date " + format_date(Date(rows[i].first)), 0);
    if (rows[i].first != expected) throw GapError(format_date(Date(expected)));
  }

  std::vector<double> values;
  values.reserve(rows.size());
  for (const auto& [_, price] : rows) values.push_back(price);
  return PriceSeries::from_values(Date(rows.front().first), std::move(values), calendar);
}

void write_csv(const PriceSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "date,price\n";
  out.precision(17);
  for (std::size_t t = 0; t < series.size(); ++t)
    out << format_date(series.date_at(t)) << ',' << series.values[t] << '\n';
}

std::vector<double> moving_average(std::span<const double> values, std::size_t window) {
  if (window == 0) throw InvalidWindow();
  if (window == 1) return {values.begin(), values.end()};
  std::vector<double> out(values.size());
  double running = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    running += values[t];
    if (t >= window) running -= values[t - window];
    const auto effective = std::min<std::size_t>(t + 1, window);
    out[t] = running / static_cast<double>(effective);
  }
  return out;
}

}  // namespace epf
