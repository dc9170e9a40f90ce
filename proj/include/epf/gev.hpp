#pragma once

#include <span>

#include "epf/errors.hpp"

namespace epf {

/// Generalized Extreme Value parameters: location mu, scale sigma > 0,
/// shape xi. |xi| < 1e-8 is routed through the Gumbel branch.
struct GevParams {
  double mu = 18.0;
  double sigma = 2.0;
  double xi = 0.7;

  void validate() const;
};

/// Density f(x) = (1/sigma) t(x)^{xi+1} e^{-t(x)}; zero outside the support.
double gev_density(const GevParams& p, double x);

/// CDF e^{-t(x)} extended by 0/1 outside the support.
double gev_cdf(const GevParams& p, double x);

/// Inverse CDF. Throws InvalidProbability unless 0 < u < 1.
double gev_quantile(const GevParams& p, double u);

/// mu + sigma ((log 2)^{-xi} - 1)/xi, Gumbel limit for xi ~ 0.
double gev_median(const GevParams& p);

double gev_loglik(const GevParams& p, std::span<const double> samples);

/// Maximum-likelihood fit. Probability-weighted-moments starting point,
/// simplex search with |xi| constrained below 5.
/// Throws InsufficientData (< 5 samples) and FitError (degenerate or
/// non-converged likelihood).
GevParams gev_fit_mle(std::span<const double> samples);

}  // namespace epf
