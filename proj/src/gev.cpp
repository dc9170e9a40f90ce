#include "epf/gev.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "epf/stats.hpp"

namespace epf {

namespace {

constexpr double kGumbelCutoff = 1e-8;
constexpr double kXiBound = 5.0;
constexpr double kPenalty = 1e100;

bool is_gumbel(double xi) { return std::abs(xi) < kGumbelCutoff; }

/// Negative log-likelihood over (mu, log sigma, xi) with support/shape
/// violations mapped to a large finite penalty the simplex can retreat from.
struct NegLogLik {
  std::span<const double> samples;

  double operator()(double mu, double log_sigma, double xi) const {
    if (std::abs(xi) >= kXiBound || !std::isfinite(log_sigma) || std::abs(log_sigma) > 500.0)
      return kPenalty;
    const double sigma = std::exp(log_sigma);
    double nll = static_cast<double>(samples.size()) * log_sigma;
    if (is_gumbel(xi)) {
      for (double x : samples) {
        const double z = (x - mu) / sigma;
        nll += z + std::exp(-z);
      }
    } else {
      for (double x : samples) {
        const double w = 1.0 + xi * (x - mu) / sigma;
        if (w <= 0.0) return kPenalty;
        const double log_t = -std::log(w) / xi;
        nll -= (xi + 1.0) * log_t - std::exp(log_t);
      }
    }
    return std::isfinite(nll) ? nll : kPenalty;
  }
};

double gsl_nll(const gsl_vector* v, void* params) {
  const auto& f = *static_cast<const NegLogLik*>(params);
  return f(gsl_vector_get(v, 0), gsl_vector_get(v, 1), gsl_vector_get(v, 2));
}

struct Start {
  double mu, sigma, xi;
};

/// Hosking's probability-weighted-moments estimates (xi = -k convention).
Start pwm_start(std::span<const double> samples) {
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fi = static_cast<double>(i);
    b0 += x[i];
    b1 += fi / (n - 1.0) * x[i];
    b2 += fi * (fi - 1.0) / ((n - 1.0) * (n - 2.0)) * x[i];
  }
  b0 /= n;
  b1 /= n;
  b2 /= n;

  const double denom = 3.0 * b2 - b0;
  if (denom != 0.0 && 2.0 * b1 - b0 != 0.0) {
    const double c = (2.0 * b1 - b0) / denom - std::log(2.0) / std::log(3.0);
    const double k = 7.8590 * c + 2.9554 * c * c;
    if (std::abs(k) > 1e-6 && std::abs(k) < 4.0) {
      const double gk = std::tgamma(1.0 + k);
      const double sigma = (2.0 * b1 - b0) * k / (gk * (1.0 - std::pow(2.0, -k)));
      const double mu = b0 + sigma * (gk - 1.0) / k;
      if (std::isfinite(sigma) && sigma > 0.0 && std::isfinite(mu)) return {mu, sigma, -k};
    } else {
      const double sigma = (2.0 * b1 - b0) / std::log(2.0);
      if (std::isfinite(sigma) && sigma > 0.0) return {b0 - 0.5772156649 * sigma, sigma, 0.0};
    }
  }
  // Robust fallback when the moment system is unusable.
  const double med = median(samples);
  const double spread = std::max(quantile(samples, 0.75) - quantile(samples, 0.25), 1e-6);
  return {med, spread, 0.1};
}

}  // namespace

void GevParams::validate() const {
  if (!(sigma > 0.0)) throw InvalidParams("GEV scale must be > 0");
}

double gev_density(const GevParams& p, double x) {
  p.validate();
  if (is_gumbel(p.xi)) {
    const double z = (x - p.mu) / p.sigma;
    const double t = std::exp(-z);
    return t * std::exp(-t) / p.sigma;
  }
  const double w = 1.0 + p.xi * (x - p.mu) / p.sigma;
  if (w <= 0.0) return 0.0;
  const double t = std::pow(w, -1.0 / p.xi);
  return std::pow(t, p.xi + 1.0) * std::exp(-t) / p.sigma;
}

double gev_cdf(const GevParams& p, double x) {
  p.validate();
  if (is_gumbel(p.xi)) return std::exp(-std::exp(-(x - p.mu) / p.sigma));
  const double w = 1.0 + p.xi * (x - p.mu) / p.sigma;
  if (w <= 0.0) return p.xi > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::pow(w, -1.0 / p.xi));
}

double gev_quantile(const GevParams& p, double u) {
  p.validate();
  if (!(u > 0.0 && u < 1.0)) throw InvalidProbability("quantile level must be in (0,1)");
  const double l = -std::log(u);
  if (is_gumbel(p.xi)) return p.mu - p.sigma * std::log(l);
  return p.mu + p.sigma * (std::pow(l, -p.xi) - 1.0) / p.xi;
}

double gev_median(const GevParams& p) {
  p.validate();
  const double l = std::log(2.0);
  if (is_gumbel(p.xi)) return p.mu - p.sigma * std::log(l);
  return p.mu + p.sigma * (std::pow(l, -p.xi) - 1.0) / p.xi;
}

double gev_loglik(const GevParams& p, std::span<const double> samples) {
  p.validate();
  NegLogLik nll{samples};
  const double v = nll(p.mu, std::log(p.sigma), p.xi);
  return v >= kPenalty ? -std::numeric_limits<double>::infinity() : -v;
}

GevParams gev_fit_mle(std::span<const double> samples) {
  if (samples.size() < 5) throw InsufficientData("GEV fit needs >= 5 samples");
  const double spread = sample_sd(samples);
  if (!(spread > 0.0)) throw FitError("constant samples: GEV scale degenerates to zero");

  NegLogLik nll{samples};
  const Start pwm = pwm_start(samples);
  const double med = median(samples);
  const Start starts[] = {
      pwm,
      {med, spread, 0.05},
      {med, spread, 0.5},
  };

  double best_nll = std::numeric_limits<double>::infinity();
  GevParams best;
  bool found = false;

  gsl_multimin_function func;
  func.n = 3;
  func.f = &gsl_nll;
  func.params = &nll;

  for (const Start& s : starts) {
    gsl_vector* x = gsl_vector_alloc(3);
    gsl_vector_set(x, 0, s.mu);
    gsl_vector_set(x, 1, std::log(std::max(s.sigma, 1e-8)));
    gsl_vector_set(x, 2, std::clamp(s.xi, -kXiBound + 0.1, kXiBound - 0.1));

    gsl_vector* step = gsl_vector_alloc(3);
    gsl_vector_set(step, 0, 0.25 * s.sigma + 1e-3);
    gsl_vector_set(step, 1, 0.3);
    gsl_vector_set(step, 2, 0.2);

    gsl_multimin_fminimizer* mini =
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3);
    gsl_multimin_fminimizer_set(mini, &func, x, step);

    int status = GSL_CONTINUE;
    for (int iter = 0; iter < 2000 && status == GSL_CONTINUE; ++iter) {
      if (gsl_multimin_fminimizer_iterate(mini) != 0) break;
      status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(mini), 1e-9);
    }

    const double value = mini->fval;
    if (value < best_nll && value < kPenalty) {
      best_nll = value;
      best.mu = gsl_vector_get(mini->x, 0);
      best.sigma = std::exp(gsl_vector_get(mini->x, 1));
      best.xi = gsl_vector_get(mini->x, 2);
      found = true;
    }
    gsl_multimin_fminimizer_free(mini);
    gsl_vector_free(x);
    gsl_vector_free(step);
  }

  if (!found) throw FitError("GEV likelihood maximization failed from every start");
  if (is_gumbel(best.xi)) best.xi = 0.0;
  return best;
}

}  // namespace epf
