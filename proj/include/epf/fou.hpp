#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "epf/errors.hpp"

namespace epf {

/// Fractional Ornstein-Uhlenbeck parameters: mean reversion around zero at
/// rate alpha1, diffusion scale sigma, Hurst exponent of the driving noise.
struct FouParams {
  double alpha1 = 0.1;
  double sigma = 6.0;
  double hurst = 0.5;
  double x0 = 0.0;

  void validate() const;
};

/// Euler-Maruyama path X[k+1] = X[k] - alpha1 X[k] dt + sigma dt^H fgn[k],
/// X[0] = x0. The increments must be unit-variance fGn; the dt^H scaling is
/// applied here. Returns n_steps + 1 values. Throws UnstableStep when
/// alpha1 * dt >= 1.
std::vector<double> simulate_fou(const FouParams& params, std::size_t n_steps, double dt,
                                 std::span<const double> fgn_increments);

/// Marginal variance V(t) = H sigma^2 int_0^t s^{2H-1} (e^{-a s} + e^{-a(2t-s)}) ds
/// by adaptive quadrature (relative tolerance 1e-8). The integrand's endpoint
/// singularity for H < 1/2 is removed by the substitution u = s^{2H}.
double fou_variance(const FouParams& params, double t);

/// Closed-form limit of fou_variance: alpha1^{-2H} H sigma^2 Gamma(2H).
double fou_stationary_variance(const FouParams& params);

}  // namespace epf
