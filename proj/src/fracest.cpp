#include "epf/fracest.hpp"

#include <cmath>

namespace epf {

namespace {

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw InvalidHurst(hurst);
}

}  // namespace

HurstEstimate estimate_hurst(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 16) throw InsufficientData("Hurst estimation needs >= 16 points");

  // Fine grid: every sample, step 1.
  double fine = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double d = series[k + 1] - 2.0 * series[k] + series[k - 1];
    fine += d * d;
  }
  // Coarse grid: every second sample, step 2.
  double coarse = 0.0;
  for (std::size_t k = 2; k + 2 < n; k += 2) {
    const double d = series[k + 2] - 2.0 * series[k] + series[k - 2];
    coarse += d * d;
  }

  if (fine == 0.0 || coarse == 0.0)
    throw DegenerateInput("second differences vanish (affine series)");

  HurstEstimate est;
  est.fine_sum = fine;
  est.coarse_sum = coarse;
  est.raw = 0.5 - std::log(fine / coarse) / (2.0 * std::log(2.0));
  est.value = est.raw;
  if (est.value < 0.01) {
    est.value = 0.01;
    est.clamped = true;
  } else if (est.value > 0.99) {
    est.value = 0.99;
    est.clamped = true;
  }
  return est;
}

double rho_2(double hurst) {
  check_hurst(hurst);
  return 8.0 - 2.0 * std::pow(2.0, 2.0 * hurst);
}

SigmaEstimate estimate_sigma(std::span<const double> series, double hurst) {
  const std::size_t n = series.size();
  if (n < 4) throw InsufficientData("sigma estimation needs >= 4 points");
  check_hurst(hurst);

  const double rho = rho_2(hurst);
  if (rho <= 0.0) throw DomainError("rho_{2,H} must be > 0");

  double v = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double d = series[k + 1] - 2.0 * series[k] + series[k - 1];
    v += d * d;
  }

  SigmaEstimate est;
  est.variation = v;
  est.rho = rho;
  est.correction = std::sqrt(2.0);
  est.raw = std::sqrt(v / (rho * static_cast<double>(n)));
  est.value = est.correction * est.raw;
  return est;
}

double estimate_alpha1(std::span<const double> series, double hurst, double sigma) {
  const std::size_t n = series.size();
  if (n < 30) throw InsufficientData("alpha1 estimation needs >= 30 points");
  check_hurst(hurst);
  if (!(sigma > 0.0)) throw InvalidParams("sigma must be > 0");

  double sum_sq = 0.0;
  for (double x : series) sum_sq += x * x;
  if (sum_sq == 0.0) throw DegenerateInput("all-zero series");

  const double denom =
      sigma * sigma * hurst * std::tgamma(2.0 * hurst) * static_cast<double>(n);
  return std::pow(sum_sq / denom, -1.0 / (2.0 * hurst));
}

double step_delta(double hurst) {
  check_hurst(hurst);
  return 1.0 / std::sqrt(1.0 + hurst);
}

double step_schedule(std::size_t n, std::size_t total, double hurst) {
  if (n == 0 || total == 0) throw InvalidParams("step schedule needs n, N >= 1");
  return std::pow(static_cast<double>(total) / static_cast<double>(n), step_delta(hurst));
}

FracEstimates estimate_fou_params(std::span<const double> series, double force_hurst) {
  FracEstimates out;
  const HurstEstimate h = estimate_hurst(series);
  if (force_hurst > 0.0) {
    out.hurst_hat = force_hurst;
    out.hurst_clamped = false;
  } else {
    out.hurst_hat = h.value;
    out.hurst_clamped = h.clamped;
  }
  out.diagnostics["hurst_raw"] = h.raw;
  out.diagnostics["fine_sum"] = h.fine_sum;
  out.diagnostics["coarse_sum"] = h.coarse_sum;

  const SigmaEstimate s = estimate_sigma(series, out.hurst_hat);
  out.sigma_hat = s.value;
  out.diagnostics["sigma_raw"] = s.raw;
  out.diagnostics["variation"] = s.variation;
  out.diagnostics["rho_2H"] = s.rho;
  out.diagnostics["sigma_correction"] = s.correction;

  out.alpha1_hat = estimate_alpha1(series, out.hurst_hat, out.sigma_hat);
  out.diagnostics["delta_H"] = step_delta(out.hurst_hat);
  return out;
}

}  // namespace epf
