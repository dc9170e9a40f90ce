#pragma once

#include <map>
#include <span>
#include <string>

#include "epf/errors.hpp"

namespace epf {

struct HurstEstimate {
  double value = 0.5;      // clamped to [0.01, 0.99]
  double raw = 0.5;        // unclamped statistic
  bool clamped = false;
  double fine_sum = 0.0;   // sum of squared second differences, step 1
  double coarse_sum = 0.0; // same on the every-second-sample grid
};

/// Hurst exponent from the ratio of second-difference energies on the step-1
/// and step-2 grids:
///   H = 1/2 - log(fine/coarse) / (2 log 2).
/// Throws InsufficientData (< 16 points) and DegenerateInput (affine series).
HurstEstimate estimate_hurst(std::span<const double> series);

struct SigmaEstimate {
  double value = 0.0;      // corrected estimate
  double raw = 0.0;        // before the sqrt(2) correction
  double variation = 0.0;  // V = sum of squared second differences
  double rho = 0.0;        // rho_{2,H} normalization constant
  double correction = 1.0;
};

/// Diffusion scale via the second-order quadratic variation with k = 2, p = 2,
/// unit step: sigma_hat = correction * sqrt(V / (rho_{2,H} N)). The published
/// statistic estimates sigma^2/2, so the correction constant is sqrt(2)
/// (pinned by the Monte-Carlo oracle in the tests).
SigmaEstimate estimate_sigma(std::span<const double> series, double hurst);

/// rho_{2,H} = sum_{j=-2..2} (-1)^{1-j} C(4, 2-j) |j|^{2H} = 8 - 2^{2H+1};
/// strictly positive on H in (0,1).
double rho_2(double hurst);

/// Ergodic mean-reversion estimator at the final discretization step (h = 1):
///   alpha1 = ( sum_k X(k)^2 / (sigma^2 H Gamma(2H) N) )^{-1/(2H)}.
/// Throws DegenerateInput on an all-zero series, InsufficientData (< 30).
double estimate_alpha1(std::span<const double> series, double hurst, double sigma);

/// delta(H) = (1+H)^{-1/2}; lies in (1/(1+H), 1) for every H in (0,1).
double step_delta(double hurst);

/// Theoretical step schedule h(n) = (N/n)^{delta(H)} for convergence
/// experiments; h(N) = 1 so the final step matches daily data.
double step_schedule(std::size_t n, std::size_t total, double hurst);

struct FracEstimates {
  double hurst_hat = 0.5;
  double sigma_hat = 0.0;
  double alpha1_hat = 0.0;
  bool hurst_clamped = false;
  std::map<std::string, double> diagnostics;
};

/// Full pipeline: H, then sigma given H, then alpha1 given both.
/// force_hurst pins H (the sBm variant) while still estimating sigma/alpha1.
FracEstimates estimate_fou_params(std::span<const double> series,
                                  double force_hurst = -1.0);

}  // namespace epf
