#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "epf/stats.hpp"
#include "epf/wavelet.hpp"

using namespace epf;

namespace {

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = normal(rng);
  return x;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("filter identities: orthonormal with 24 vanishing moments") {
  const auto h = daubechies24();
  REQUIRE(h.size() == 48);

  double sum = 0.0, sumsq = 0.0;
  for (double c : h) {
    sum += c;
    sumsq += c * c;
  }
  CHECK(sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sumsq == doctest::Approx(1.0).epsilon(1e-14));

  for (std::size_t k = 1; k < 24; ++k) {
    double dot = 0.0;
    for (std::size_t i = 0; i + 2 * k < h.size(); ++i) dot += h[i] * h[i + 2 * k];
    CHECK(std::abs(dot) < 1e-14);
  }

  // first two vanishing moments of the conjugate high-pass
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double g = ((j % 2 == 0) ? 1.0 : -1.0) * h[h.size() - 1 - j];
    m0 += g;
    m1 += static_cast<double>(j) * g;
  }
  CHECK(std::abs(m0) < 1e-13);
  CHECK(std::abs(m1) < 1e-11);
}

TEST_CASE("single-step round trip at several lengths") {
  for (std::size_t n : {64u, 100u, 257u, 730u}) {
    const auto x = random_signal(n, 40 + n);
    const DwtPair bands = dwt(x);
    const auto back = idwt(bands.approx, bands.detail, n);
    CHECK(max_abs_diff(x, back) < 1e-12);
  }
}

TEST_CASE("level-8 analysis + synthesis reconstructs random signals") {
  for (int rep = 0; rep < 20; ++rep) {
    const auto x = random_signal(1024, 7000 + rep);
    const auto dec = wavedec(x, 8);
    const auto back = waverec(dec);
    REQUIRE(back.size() == x.size());
    CHECK(max_abs_diff(x, back) < 1e-10);
  }
  // odd-length inputs exercise the cropping bookkeeping
  const auto x = random_signal(731, 99);
  CHECK(max_abs_diff(x, waverec(wavedec(x, 8))) < 1e-10);
}

TEST_CASE("constants are reproduced by the level-8 approximation") {
  for (std::size_t n : {256u, 730u}) {
    const std::vector<double> c(n, 57.25);
    const auto smooth = wavelet_smooth(c, 8);
    REQUIRE(smooth.size() == n);
    for (double v : smooth) CHECK(v == doctest::Approx(57.25).epsilon(1e-8));
  }
}

TEST_CASE("smoothing is linear") {
  const auto x = random_signal(512, 1);
  const auto y = random_signal(512, 2);
  std::vector<double> combo(512);
  for (std::size_t i = 0; i < 512; ++i) combo[i] = 3.0 * x[i] - 1.5 * y[i];

  const auto sx = wavelet_smooth(x, 8);
  const auto sy = wavelet_smooth(y, 8);
  const auto sc = wavelet_smooth(combo, 8);
  for (std::size_t i = 0; i < 512; ++i)
    CHECK(sc[i] == doctest::Approx(3.0 * sx[i] - 1.5 * sy[i]).epsilon(1e-9));
}

TEST_CASE("length guard") {
  const auto x = random_signal(255, 3);
  CHECK_THROWS_AS(wavedec(x, 8), InsufficientData);
  CHECK_NOTHROW(wavedec(random_signal(256, 3), 8));
}

TEST_CASE("smoothing separates a slow sinusoid from fast noise") {
  // The level-k approximation keeps periods above about 2^{k+1} samples.
  // A 400-day cycle falls inside the level-7 band; the default level 8
  // needs periods past ~600 days (a 400-day cycle is attenuated there).
  const std::size_t n = 1024;
  std::mt19937_64 rng(123);
  std::normal_distribution<double> noise(0.0, 1.0);

  const auto run = [&](double period, int level) {
    std::vector<double> sinusoid(n), noisy(n);
    for (std::size_t t = 0; t < n; ++t) {
      sinusoid[t] = 10.0 * std::sin(2.0 * M_PI * static_cast<double>(t) / period);
      noisy[t] = sinusoid[t] + noise(rng);
    }
    return pearson_correlation(wavelet_smooth(noisy, level), sinusoid);
  };

  CHECK(run(400.0, 7) > 0.95);
  CHECK(run(700.0, 8) > 0.95);
  CHECK(run(400.0, 8) < 0.9);  // past the level-8 band edge
}
