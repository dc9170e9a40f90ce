#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epf/fgn.hpp"
#include "epf/fou.hpp"
#include "epf/stats.hpp"

using namespace epf;

TEST_CASE("deterministic decay and zero paths") {
  const std::vector<double> zero_noise(8, 0.0);

  FouParams p{0.1, 0.0, 0.5, 1.0};
  const auto path = simulate_fou(p, 1, 1.0, zero_noise);
  REQUIRE(path.size() == 2);
  CHECK(path[0] == 1.0);
  CHECK(path[1] == doctest::Approx(0.9).epsilon(1e-15));

  p.x0 = 0.0;
  for (double v : simulate_fou(p, 8, 1.0, zero_noise)) CHECK(v == 0.0);
}

TEST_CASE("explicit step stability guard") {
  const std::vector<double> noise(4, 0.0);
  FouParams p{1.2, 1.0, 0.5, 0.0};
  CHECK_THROWS_AS(simulate_fou(p, 4, 1.0, noise), UnstableStep);
  CHECK_NOTHROW(simulate_fou(p, 4, 0.5, noise));
}

TEST_CASE("Brownian case reaches the classical OU stationary variance") {
  const FouParams p{0.1, 6.0, 0.5, 0.0};
  const std::size_t n = 5000;
  // one path's tail variance is noisy (autocorrelation time 1/alpha), so
  // average the statistic over ten independent paths
  double acc = 0.0;
  for (std::uint64_t seed = 90; seed < 100; ++seed) {
    const auto noise = sample_fgn(FgnSpec{0.5, n, seed});
    const auto path = simulate_fou(p, n, 1.0, noise);
    std::vector<double> tail(path.begin() + 1000, path.end());
    acc += sample_variance(tail);
  }
  CHECK(acc / 10.0 == doctest::Approx(180.0).epsilon(0.10));
}

TEST_CASE("fou_variance: boundary cases and Brownian closed form") {
  const FouParams p{0.1, 6.0, 0.5, 0.0};
  CHECK(fou_variance(p, 0.0) == 0.0);
  CHECK_THROWS_AS(fou_variance(p, -1.0), InvalidTime);

  // H = 1/2 collapses to sigma^2/(2 alpha) (1 - e^{-2 alpha t}).
  for (double t : {0.5, 3.0, 20.0, 400.0}) {
    const double expected = 180.0 * (1.0 - std::exp(-2.0 * 0.1 * t));
    CHECK(fou_variance(p, t) == doctest::Approx(expected).epsilon(1e-7));
  }
  CHECK(fou_variance(p, 400.0) == doctest::Approx(180.0).epsilon(1e-7));
}

TEST_CASE("fou_variance approaches the stationary asymptote for H != 1/2") {
  for (double hurst : {0.2, 0.7}) {
    const FouParams p{0.1, 6.0, hurst, 0.0};
    const double limit = fou_stationary_variance(p);
    const double v = fou_variance(p, 300.0);
    CHECK(std::abs(v - limit) / limit < 1e-6);
  }
}

TEST_CASE("stationary variance closed form") {
  CHECK(fou_stationary_variance(FouParams{0.1, 6.0, 0.5, 0.0}) ==
        doctest::Approx(180.0).epsilon(1e-12));
  CHECK(fou_stationary_variance(FouParams{1.0, std::sqrt(2.0), 0.5, 0.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const double expected = std::pow(0.1, -1.4) * 0.7 * 36.0 * std::tgamma(1.4);
  CHECK(fou_stationary_variance(FouParams{0.1, 6.0, 0.7, 0.0}) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(561.63).epsilon(0.005));
}

TEST_CASE("fou_variance: monotone and bounded for H >= 1/2") {
  for (double hurst : {0.5, 0.8}) {
    const FouParams p{0.2, 2.0, hurst, 0.0};
    const double limit = fou_stationary_variance(p);
    double prev = 0.0;
    for (double t : {0.25, 1.0, 3.0, 8.0, 20.0, 60.0, 150.0}) {
      const double v = fou_variance(p, t);
      CHECK(v >= prev - 1e-10);
      CHECK(v <= limit * (1.0 + 1e-6));  // limit reached up to quadrature tolerance
      prev = v;
    }
  }
}

TEST_CASE("fou_variance: antipersistent transient overshoots the asymptote") {
  // For H < 1/2 the marginal variance peaks above its limit before settling
  // (checked against 40-digit quadrature of the same integral).
  const FouParams p{0.2, 2.0, 0.3, 0.0};
  const double limit = fou_stationary_variance(p);
  CHECK(fou_variance(p, 8.0) == doctest::Approx(4.829551474).epsilon(1e-7));
  CHECK(fou_variance(p, 8.0) > limit);
  CHECK(fou_variance(p, 150.0) == doctest::Approx(limit).epsilon(1e-8));
}

TEST_CASE("marginal distribution: Gaussian shape and mean decay") {
  // 10^4 replications of X1(t) for fixed t.
  const double alpha = 0.05, sigma = 1.0, x0 = 10.0, dt = 0.25;
  const std::size_t steps = 40;  // t = 10 days
  const FouParams p{alpha, sigma, 0.5, x0};

  const FgnGenerator gen(0.5, steps);
  const std::size_t reps = 10000;
  const auto noise = gen.sample_batch(2024, reps);
  std::vector<double> terminal(reps);
  for (std::size_t r = 0; r < reps; ++r) terminal[r] = simulate_fou(p, steps, dt, noise[r]).back();

  CHECK(std::abs(skewness(terminal)) < 0.1);
  CHECK(std::abs(excess_kurtosis(terminal)) < 0.2);

  const double expected_mean = x0 * std::exp(-alpha * 10.0);
  const double euler_mean = x0 * std::pow(1.0 - alpha * dt, static_cast<double>(steps));
  const double se = sample_sd(terminal) / std::sqrt(static_cast<double>(reps));
  // 3 SE around the continuous-time mean, plus the explicit Euler bias.
  CHECK(std::abs(mean(terminal) - expected_mean) <
        3.0 * se + std::abs(euler_mean - expected_mean));
}
