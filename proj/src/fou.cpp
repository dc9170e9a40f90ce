#include "epf/fou.hpp"

#include <cmath>

#include "epf/quadrature.hpp"

namespace epf {

void FouParams::validate() const {
  if (!(alpha1 > 0.0)) throw InvalidParams("alpha1 must be > 0");
  if (!(sigma >= 0.0)) throw InvalidParams("sigma must be >= 0");
  if (!(hurst > 0.0 && hurst < 1.0)) throw InvalidHurst(hurst);
}

std::vector<double> simulate_fou(const FouParams& params, std::size_t n_steps, double dt,
                                 std::span<const double> fgn_increments) {
  params.validate();
  if (n_steps == 0) throw InsufficientData("need at least one step");
  if (!(dt > 0.0)) throw InvalidParams("dt must be > 0");
  if (params.alpha1 * dt >= 1.0)
    throw UnstableStep("alpha1 * dt = " + std::to_string(params.alpha1 * dt) + " >= 1");
  if (fgn_increments.size() < n_steps)
    throw InsufficientData("need " + std::to_string(n_steps) + " fGn increments, got " +
                           std::to_string(fgn_increments.size()));

  const double noise_scale = params.sigma * std::pow(dt, params.hurst);
  std::vector<double> path(n_steps + 1);
  path[0] = params.x0;
  for (std::size_t k = 0; k < n_steps; ++k)
    path[k + 1] = path[k] - params.alpha1 * path[k] * dt + noise_scale * fgn_increments[k];
  return path;
}

double fou_variance(const FouParams& params, double t) {
  params.validate();
  if (t < 0.0) throw InvalidTime("t must be >= 0");
  if (t == 0.0) return 0.0;

  const double h = params.hurst;
  const double a = params.alpha1;
  const double pre = h * params.sigma * params.sigma;
  constexpr double kRelTol = 1e-8;

  if (h < 0.5) {
    // u = s^{2H} turns s^{2H-1} ds into du / (2H); the integrand becomes
    // bounded at the origin.
    const double two_h = 2.0 * h;
    const auto g = [&](double u) {
      const double s = std::pow(u, 1.0 / two_h);
      return std::exp(-a * s) + std::exp(-a * (2.0 * t - s));
    };
    const double integral = adaptive_simpson(g, 0.0, std::pow(t, two_h), kRelTol);
    return pre * integral / two_h;
  }

  const auto f = [&](double s) {
    return std::pow(s, 2.0 * h - 1.0) * (std::exp(-a * s) + std::exp(-a * (2.0 * t - s)));
  };
  return pre * adaptive_simpson(f, 0.0, t, kRelTol);
}

double fou_stationary_variance(const FouParams& params) {
  params.validate();
  const double h = params.hurst;
  return std::pow(params.alpha1, -2.0 * h) * h * params.sigma * params.sigma *
         std::tgamma(2.0 * h);
}

}  // namespace epf
