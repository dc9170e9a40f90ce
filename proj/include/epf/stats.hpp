#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "epf/errors.hpp"

namespace epf {

inline double mean(std::span<const double> x) {
  if (x.empty()) throw EmptyInput("mean of empty sequence");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Unbiased sample variance (n-1 denominator).
inline double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw InsufficientData("variance needs >= 2 samples");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

inline double sample_sd(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

inline double median(std::span<const double> x) {
  if (x.empty()) throw EmptyInput("median of empty sequence");
  std::vector<double> v(x.begin(), x.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

/// Empirical quantile with linear interpolation between order statistics
/// (the numpy/R type-7 rule). q in [0,1].
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw EmptyInput("quantile of empty sequence");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

inline double quantile(std::span<const double> x, double q) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, q);
}

inline double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InsufficientData("correlation needs two equal-length sequences of size >= 2");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("correlation of constant sequence");
  return sxy / std::sqrt(sxx * syy);
}

inline double skewness(std::span<const double> x) {
  const double m = mean(x);
  double s2 = 0.0, s3 = 0.0;
  for (double v : x) {
    const double d = v - m;
    s2 += d * d;
    s3 += d * d * d;
  }
  const double n = static_cast<double>(x.size());
  const double sd = std::sqrt(s2 / n);
  return (s3 / n) / (sd * sd * sd);
}

inline double excess_kurtosis(std::span<const double> x) {
  const double m = mean(x);
  double s2 = 0.0, s4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    s2 += d * d;
    s4 += d * d * d * d;
  }
  const double n = static_cast<double>(x.size());
  const double var = s2 / n;
  return (s4 / n) / (var * var) - 3.0;
}

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace epf
