#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "epf/metrics.hpp"
#include "epf/stats.hpp"

using namespace epf;

namespace {

ScoredForecast make_pair(const std::string& variant, int h, double center, double spread,
                         double realized) {
  ScoredForecast f;
  f.variant = variant;
  f.horizon = h;
  for (int p = 1; p <= 99; ++p)
    f.quantiles[static_cast<std::size_t>(p - 1)] =
        center + spread * (static_cast<double>(p) - 50.0) / 50.0;
  f.realized = realized;
  return f;
}

}  // namespace

TEST_CASE("Winkler score conventions") {
  CHECK(winkler_score(10, 20, 15, 0.50) == doctest::Approx(10.0));
  CHECK(winkler_score(10, 20, 15, 0.90) == doctest::Approx(10.0));
  CHECK(winkler_score(10, 20, 25, 0.90) == doctest::Approx(110.0));
  CHECK(winkler_score(10, 20, 5, 0.50) == doctest::Approx(30.0));
  CHECK(winkler_score(10, 20, 10, 0.50) == doctest::Approx(10.0));  // boundary counts inside
  CHECK_THROWS_AS(winkler_score(20, 10, 15, 0.5), InvalidInterval);
  CHECK_THROWS_AS(winkler_score(10, 20, 15, 0.0), InvalidProbability);
}

TEST_CASE("Winkler >= width with equality exactly inside") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int rep = 0; rep < 500; ++rep) {
    double lo = u(rng), hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    const double p = u(rng);
    const double ws = winkler_score(lo, hi, p, 0.9);
    CHECK(ws >= hi - lo - 1e-12);
    if (p >= lo && p <= hi)
      CHECK(ws == doctest::Approx(hi - lo));
    else
      CHECK(ws > hi - lo);
  }
}

TEST_CASE("pinball loss") {
  CHECK(pinball(42.0, 42.0, 0.3) == 0.0);
  CHECK(pinball(10.0, 16.0, 0.5) == doctest::Approx(0.5 * 6.0));
  CHECK(pinball(16.0, 10.0, 0.5) == doctest::Approx(0.5 * 6.0));
  CHECK(pinball(90.0, 100.0, 0.99) == doctest::Approx(9.9));
  CHECK(pinball(90.0, 100.0, 0.99) >= 0.0);
  CHECK_THROWS_AS(pinball(1.0, 2.0, 0.0), InvalidProbability);
}

TEST_CASE("pinball is minimized in expectation at the true quantile") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> draws(100000);
  for (auto& d : draws) d = normal(rng);

  const double q = 0.75;
  const double z_q = 0.6744897501960817;  // standard normal 75% quantile
  const auto avg_loss = [&](double forecast) {
    double acc = 0.0;
    for (double d : draws) acc += pinball(forecast, d, q);
    return acc / static_cast<double>(draws.size());
  };
  const double at_true = avg_loss(z_q);
  CHECK(at_true < avg_loss(z_q + 0.25));
  CHECK(at_true < avg_loss(z_q - 0.25));
}

TEST_CASE("unconditional coverage basics") {
  const std::vector<double> lo{0, 0, 0, 0}, hi{10, 10, 10, 10};
  const std::vector<double> inside{1, 5, 9, 10};
  const std::vector<double> outside{-1, 11, 12, -3};

  const CoverageResult all = unconditional_coverage(lo, hi, inside, 0.9);
  CHECK(all.rate == doctest::Approx(1.0));
  CHECK(all.error == doctest::Approx(0.1));

  const CoverageResult none = unconditional_coverage(lo, hi, outside, 0.9);
  CHECK(none.rate == doctest::Approx(0.0));
  CHECK(none.abs_error == doctest::Approx(0.9));

  CHECK_THROWS_AS(unconditional_coverage({}, {}, {}, 0.9), EmptyInput);
}

TEST_CASE("bootstrap intervals achieve nominal coverage on their own law") {
  // The naive model draws residuals with replacement; an interval built from
  // the draw quantiles must cover fresh draws from the same pool at the
  // nominal rate within a few points.
  std::mt19937_64 rng(2025);
  std::normal_distribution<double> normal(0.0, 5.0);
  std::vector<double> pool(730);
  for (auto& v : pool) v = normal(rng);

  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::size_t inside = 0;
  const int trials = 10000;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> draws(500);
    for (auto& d : draws) d = pool[pick(rng)];
    std::sort(draws.begin(), draws.end());
    const double lo = quantile_sorted(draws, 0.05);
    const double hi = quantile_sorted(draws, 0.95);
    const double realized = pool[pick(rng)];
    if (realized >= lo && realized <= hi) ++inside;
  }
  const double rate = static_cast<double>(inside) / trials;
  CHECK(rate > 0.87);
  CHECK(rate < 0.93);
}

TEST_CASE("aggregate report: single pair and two-horizon average") {
  std::vector<ScoredForecast> pairs;
  pairs.push_back(make_pair("fbm", 1, 50.0, 10.0, 52.0));
  const EvaluationReport single = aggregate_report(pairs);
  REQUIRE(single.variants.size() == 1);
  const VariantReport& v = single.variants[0];
  CHECK(v.per_horizon.size() == 1);
  // WS50: interval from q25 to q75 = [45, 55], realized inside -> width 10
  CHECK(v.winkler50_avg == doctest::Approx(10.0));
  CHECK(v.coverage_avg.at(50).rate == doctest::Approx(1.0));

  // second horizon built to double the WS50 width
  pairs.push_back(make_pair("fbm", 2, 50.0, 20.0, 52.0));
  const EvaluationReport both = aggregate_report(pairs);
  CHECK(both.variants[0].winkler50_avg == doctest::Approx((10.0 + 20.0) / 2.0));

  CHECK_THROWS_AS(aggregate_report(std::vector<ScoredForecast>{}), EmptyInput);
}

TEST_CASE("report serialization: CSV table layout and JSON round trip") {
  std::vector<ScoredForecast> pairs;
  for (int h = 1; h <= 3; ++h) {
    pairs.push_back(make_pair("fbm", h, 50.0, 10.0, 52.0));
    pairs.push_back(make_pair("sbm", h, 50.0, 12.0, 52.0));
    pairs.push_back(make_pair("naive", h, 50.0, 15.0, 80.0));
  }
  const EvaluationReport report = aggregate_report(pairs);

  const auto csv_path = std::filesystem::temp_directory_path() / "epf_report.csv";
  write_report_csv(report, csv_path);
  std::ifstream in(csv_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "score,fbm,naive,sbm");
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) rows.push_back(line.substr(0, line.find(',')));
  const std::vector<std::string> expected{"UC50", "UC50_error", "UC50_abs_error",
                                          "UC90", "UC90_error", "UC90_abs_error",
                                          "UC98", "UC98_error", "UC98_abs_error",
                                          "WS50", "WS90",       "PLF"};
  CHECK(rows == expected);

  const auto json_path = std::filesystem::temp_directory_path() / "epf_report.json";
  write_report_json(report, json_path);
  CHECK(std::filesystem::file_size(json_path) > 100);
}
