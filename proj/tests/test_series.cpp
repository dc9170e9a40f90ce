#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "epf/series.hpp"

using namespace epf;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

Date d(int y, unsigned m, unsigned day) {
  return Date{std::chrono::year(y), std::chrono::month(m), std::chrono::day(day)};
}

}  // namespace

TEST_CASE("ISO date parsing and formatting") {
  const Date date = parse_date("2009-01-05");
  CHECK(format_date(date) == "2009-01-05");
  CHECK_THROWS_AS(parse_date("2009/01/05"), ParseError);
  CHECK_THROWS_AS(parse_date("2009-13-05"), ParseError);
  CHECK_THROWS_AS(parse_date("09-01-05"), ParseError);
}

TEST_CASE("day labels: weekdays, fixed holidays, Easter Monday") {
  const auto cal = HolidayCalendar::italian();
  CHECK(day_label(d(2009, 1, 5), cal) == 1);    // Monday
  CHECK(day_label(d(2009, 1, 11), cal) == 7);   // Sunday
  CHECK(day_label(d(2009, 12, 25), cal) == 8);  // Christmas on a Friday
  // Gauss computus: Easter 2010 falls on April 4, so April 5 is a holiday.
  CHECK(format_date(easter_sunday(2010)) == "2010-04-04");
  CHECK(day_label(d(2010, 4, 5), cal) == 8);
  CHECK(format_date(easter_sunday(2009)) == "2009-04-12");
  CHECK(day_label(d(2009, 4, 13), cal) == 8);
}

TEST_CASE("load_csv: basic, holiday label, gap, parse and empty errors") {
  const auto cal = HolidayCalendar::italian();
  const auto path = temp_file("epf_series_ok.csv");

  write_text(path, "date,price\n2009-01-01,60.5\n2009-01-02,58.1\n2009-01-03,55.0\n");
  const PriceSeries s = load_csv(path, cal);
  CHECK(s.size() == 3);
  CHECK(s.values[0] == doctest::Approx(60.5));
  CHECK(s.labels[0] == 8);  // Jan 1 holiday
  CHECK(s.labels[1] == 5);  // Friday

  write_text(path, "date,price\n2009-01-02,58.1\n2009-01-01,60.5\n2009-01-03,55.0\n");
  CHECK(load_csv(path, cal).values[0] == doctest::Approx(60.5));  // sorted by date

  write_text(path, "date,price\n2009-01-02,58.1\n2009-01-03,55.0\n2009-01-05,51.0\n");
  try {
    load_csv(path, cal);
    FAIL("expected GapError");
  } catch (const GapError& e) {
    CHECK(e.missing_date() == "2009-01-04");
  }

  write_text(path, "date,price\n2009-01-01,sixty\n2009-01-02,58.1\n");
  CHECK_THROWS_AS(load_csv(path, cal), ParseError);

  write_text(path, "date,price\n");
  CHECK_THROWS_AS(load_csv(path, cal), EmptyInput);
}

TEST_CASE("load_csv round-trips write_csv") {
  const auto cal = HolidayCalendar::italian();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(20.0, 150.0);
  std::vector<double> values(40);
  for (auto& v : values) v = u(rng);
  const PriceSeries original = PriceSeries::from_values(d(2009, 3, 10), values, cal);

  const auto path = temp_file("epf_series_rt.csv");
  write_csv(original, path);
  const PriceSeries reloaded = load_csv(path, cal);
  REQUIRE(reloaded.size() == original.size());
  CHECK(format_date(reloaded.start_date) == format_date(original.start_date));
  for (std::size_t t = 0; t < original.size(); ++t) {
    CHECK(reloaded.values[t] == doctest::Approx(original.values[t]).epsilon(1e-12));
    CHECK(reloaded.labels[t] == original.labels[t]);
  }
}

TEST_CASE("label counts partition the series") {
  const auto cal = HolidayCalendar::italian();
  std::vector<double> values(365, 50.0);
  const PriceSeries s = PriceSeries::from_values(d(2009, 1, 1), values, cal);
  std::size_t total = 0;
  for (int label = 1; label <= 8; ++label)
    total += static_cast<std::size_t>(
        std::count(s.labels.begin(), s.labels.end(), label));
  CHECK(total == s.size());
}

TEST_CASE("holiday calendar from file") {
  const auto path = temp_file("epf_holidays.txt");
  write_text(path, "# strike days\n2009-03-02\n\n2009-03-03\n");
  auto cal = HolidayCalendar::italian();
  cal.add_dates_from_file(path);
  CHECK(day_label(d(2009, 3, 2), cal) == 8);
  CHECK(day_label(d(2009, 3, 3), cal) == 8);
  CHECK(day_label(d(2009, 3, 4), cal) == 3);
}

TEST_CASE("moving average: trailing window with warm-up") {
  CHECK(moving_average(std::vector<double>{1, 2, 3}, 1) == std::vector<double>{1, 2, 3});
  CHECK(moving_average(std::vector<double>{2, 2, 2, 2}, 30) == std::vector<double>{2, 2, 2, 2});
  const auto out = moving_average(std::vector<double>{0, 10}, 2);
  CHECK(out[0] == doctest::Approx(0.0));
  CHECK(out[1] == doctest::Approx(5.0));
  CHECK_THROWS_AS(moving_average(std::vector<double>{1.0}, 0), InvalidWindow);

  // window 1 is the identity on arbitrary values
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 3.0);
  std::vector<double> x(100);
  for (auto& v : x) v = n(rng);
  CHECK(moving_average(x, 1) == x);

  // trailing mean cross-check on a ramp
  const auto ramp = moving_average(std::vector<double>{1, 2, 3, 4, 5, 6}, 3);
  CHECK(ramp[4] == doctest::Approx((3 + 4 + 5) / 3.0));
  CHECK(ramp[1] == doctest::Approx(1.5));
}
