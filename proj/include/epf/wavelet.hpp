#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "epf/errors.hpp"

namespace epf {

/// Daubechies scaling filter of order 24 (48 taps, orthonormal,
/// sum = sqrt(2)). Standard extremal-phase orientation.
std::span<const double> daubechies24();

struct DwtPair {
  std::vector<double> approx;
  std::vector<double> detail;
};

/// One analysis step with half-sample symmetric extension. The transform is
/// expansive: each band holds floor((n-1)/2) + taps/2 coefficients, enough to
/// reconstruct all n input samples exactly.
DwtPair dwt(std::span<const double> x);

/// Inverse of dwt for the stated output length.
std::vector<double> idwt(std::span<const double> approx, std::span<const double> detail,
                         std::size_t out_len);

struct WaveletDecomposition {
  std::vector<double> approx;                 // deepest-level approximation
  std::vector<std::vector<double>> details;   // details[0] = level 1 (finest)
  std::vector<std::size_t> lengths;           // input length at each analysis step
};

/// Cascade of `level` analysis steps. Throws InsufficientData when the input
/// is shorter than 2^level.
WaveletDecomposition wavedec(std::span<const double> x, int level);

std::vector<double> waverec(const WaveletDecomposition& dec);

/// Reconstruction from the approximation band alone (all details zeroed):
/// the smooth W_level component of the signal.
std::vector<double> wavelet_smooth(std::span<const double> x, int level);

}  // namespace epf
