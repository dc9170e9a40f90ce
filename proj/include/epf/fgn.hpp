#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "epf/errors.hpp"

namespace epf {

struct FgnSpec {
  double hurst = 0.5;
  std::size_t length = 1;
  std::uint64_t seed = 0;
};

/// Autocovariance of unit-spaced, unit-variance fractional Gaussian noise:
/// gamma(k) = 0.5 (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}), gamma(0) = 1.
double fgn_autocovariance(double hurst, std::size_t lag);

/// Exact fGn sampler: embeds the Toeplitz covariance into a circulant matrix
/// diagonalized by the DFT. Valid for every H in (0,1), so the same generator
/// covers the antipersistent and persistent regimes.
///
/// Construction computes the circulant eigenvalues once; sample() can then be
/// called repeatedly (and concurrently) with distinct seeds.
class FgnGenerator {
 public:
  /// Throws InvalidHurst, or EmbeddingError if an eigenvalue is below -1e-9.
  /// Eigenvalues in (-1e-9, 0) are clipped to zero.
  FgnGenerator(double hurst, std::size_t length);

  std::vector<double> sample(std::uint64_t seed) const;

  /// Draws `count` independent paths from one engine seeded with `seed`,
  /// reusing a single FFT plan. sample_batch(seed, 1)[0] == sample(seed).
  std::vector<std::vector<double>> sample_batch(std::uint64_t seed, std::size_t count) const;

  double hurst() const { return hurst_; }
  std::size_t length() const { return n_; }
  std::size_t embedding_size() const { return m_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double hurst_;
  std::size_t n_;
  std::size_t m_;
  double min_eigenvalue_;
  std::vector<double> sqrt_eig_;  // sqrt(lambda_j / m), j = 0..m-1
};

/// One-shot convenience over FgnGenerator.
std::vector<double> sample_fgn(const FgnSpec& spec);

/// Cumulative sums of the increments: B(k) = sum_{i<=k} fgn[i], B(0)=0 implied.
std::vector<double> fbm_from_fgn(std::span<const double> increments);

}  // namespace epf
