#include "epf/filter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "epf/stats.hpp"
#include "epf/wavelet.hpp"

namespace epf {

namespace {

constexpr double kSpikeThreshold = 2.5;  // in units of sigma_tilde

/// Steepest one-step decay rate of a strictly positive copy of the series:
/// alpha2 = log(max_j y(j-1)/y(j)). The copy is shifted by (min - 1) whenever
/// the minimum is <= 0 so every ratio is defined.
double alpha2_raw(std::span<const double> y) {
  std::vector<double> shifted(y.begin(), y.end());
  const double lo = *std::min_element(shifted.begin(), shifted.end());
  if (lo <= 0.0)
    for (double& v : shifted) v -= lo - 1.0;
  double max_ratio = 0.0;
  for (std::size_t j = 1; j < shifted.size(); ++j)
    max_ratio = std::max(max_ratio, shifted[j - 1] / shifted[j]);
  return std::log(max_ratio);
}

std::vector<double> detect_increments(std::span<const double> y_w, double alpha2) {
  const std::vector<double> ma30 = moving_average(y_w, 30);
  // Blended series Y~_w(t) = (1 - a) Y_w(t) + a Ybar30(t).
  std::vector<double> incr(y_w.size() - 1);
  for (std::size_t t = 1; t < y_w.size(); ++t) {
    const double blended_prev = (1.0 - alpha2) * y_w[t - 1] + alpha2 * ma30[t - 1];
    incr[t - 1] = y_w[t] - blended_prev;
  }
  return incr;
}

}  // namespace

WeeklyProfile weekly_profile(const PriceSeries& series) {
  WeeklyProfile p;
  p.mean = mean(series.values);

  std::array<double, 8> sums{};
  std::array<std::size_t, 8> counts{};
  for (std::size_t t = 0; t < series.size(); ++t) {
    const int l = series.labels[t] - 1;
    sums[static_cast<std::size_t>(l)] += series.values[t];
    counts[static_cast<std::size_t>(l)] += 1;
  }
  for (std::size_t l = 0; l < 8; ++l) {
    p.label_present[l] = counts[l] > 0;
    p.label_means[l] = counts[l] > 0 ? sums[l] / static_cast<double>(counts[l]) : p.mean;
  }

  p.dummies.resize(series.size());
  for (std::size_t t = 0; t < series.size(); ++t)
    p.dummies[t] = p.label_means[static_cast<std::size_t>(series.labels[t] - 1)];
  return p;
}

std::vector<double> deseasonalize_weekly(const PriceSeries& series) {
  const WeeklyProfile p = weekly_profile(series);
  std::vector<double> y_w(series.size());
  for (std::size_t t = 0; t < series.size(); ++t)
    y_w[t] = series.values[t] - (p.dummies[t] - p.mean);
  return y_w;
}

SpikeDetection detect_spikes(std::span<const double> y_w) {
  if (y_w.size() < 60) throw InsufficientData("spike detection needs >= 60 points");

  SpikeDetection out;
  const double raw = alpha2_raw(y_w);
  out.alpha2_hat = std::clamp(raw, 0.01, 0.99);
  out.alpha2_clamped = out.alpha2_hat != raw;

  const std::vector<double> incr = detect_increments(y_w, out.alpha2_hat);
  out.sigma_tilde = sample_sd(incr);
  if (!(out.sigma_tilde > 0.0)) throw DegenerateInput("zero dispersion in modified increments");

  const double threshold = kSpikeThreshold * out.sigma_tilde;
  for (std::size_t t = 1; t < y_w.size(); ++t) {
    const double jump = incr[t - 1];
    if (std::abs(jump) > threshold) {
      out.events.times.push_back(static_cast<double>(t));
      out.events.marks.push_back(jump);
    }
  }
  out.events.horizon = static_cast<double>(y_w.size() - 1);
  return out;
}

std::vector<double> reconstruct_jump_series(const EventStream& events, double alpha2,
                                            std::size_t n_days) {
  if (!(alpha2 > 0.0)) throw InvalidParams("alpha2 must be > 0");
  std::vector<double> y_j(n_days, 0.0);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const double tau = events.times[i];
    const double mu = events.marks[i];
    for (std::size_t t = static_cast<std::size_t>(std::ceil(tau)); t < n_days; ++t)
      y_j[t] += mu * std::exp(-alpha2 * (static_cast<double>(t) - tau));
  }
  return y_j;
}

std::vector<double> wavelet_trend(std::span<const double> y_s, int level) {
  return wavelet_smooth(y_s, level);
}

std::vector<double> prolong_to_median(std::span<const double> y, std::size_t horizon,
                                      double theta) {
  if (y.empty()) throw EmptyInput("nothing to prolong");
  if (horizon < 1) throw InvalidParams("horizon must be >= 1");
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidParams("theta must be in (0,1)");

  const double m = median(y);
  const double last = y.back();
  std::vector<double> out(y.begin(), y.end());
  out.reserve(y.size() + horizon);
  double factor = 1.0;
  for (std::size_t j = 1; j <= horizon; ++j) {
    factor *= theta;
    out.push_back(m + (last - m) * factor);
  }
  return out;
}

std::vector<double> extend_trend(std::span<const double> y_s, std::size_t horizon, double theta,
                                 int level) {
  const std::vector<double> prolonged = prolong_to_median(y_s, horizon, theta);
  return wavelet_trend(prolonged, level);
}

Decomposition decompose(const PriceSeries& series, const DecomposeConfig& config) {
  if (series.size() < 256) throw InsufficientData("decomposition needs >= 256 days");

  Decomposition d;
  const WeeklyProfile profile = weekly_profile(series);
  d.mean_price = profile.mean;
  d.label_means = profile.label_means;
  d.label_present = profile.label_present;

  const std::size_t n = series.size();
  d.f_s.resize(n);
  d.y_w.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    d.f_s[t] = profile.dummies[t] - profile.mean;
    d.y_w[t] = series.values[t] - d.f_s[t];
  }

  try {
    SpikeDetection spikes = detect_spikes(d.y_w);
    d.alpha2_hat = spikes.alpha2_hat;
    d.alpha2_clamped = spikes.alpha2_clamped;
    d.sigma_tilde = spikes.sigma_tilde;
    d.jump_events = spikes.events;
  } catch (const DegenerateInput&) {
    // No increment dispersion means nothing can exceed the spike rule:
    // treat the window as jump-free rather than failing the pipeline.
    d.alpha2_hat = 0.5;
    d.alpha2_clamped = true;
    d.sigma_tilde = 0.0;
    d.jump_events = EventStream{};
  }
  d.jump_events.horizon = static_cast<double>(n - 1);
  d.y_j = reconstruct_jump_series(d.jump_events, d.alpha2_hat, n);

  if (config.iterate_spikes) {
    // Re-scan the residual with the first-pass alpha2/sigma until no new
    // events appear. Clustered spikes already handled by the blending are
    // rarely affected; this catches stragglers.
    for (int round = 0; round < 10; ++round) {
      std::vector<double> residual(n);
      for (std::size_t t = 0; t < n; ++t) residual[t] = d.y_w[t] - d.y_j[t];
      const std::vector<double> incr = detect_increments(residual, d.alpha2_hat);
      const double threshold = kSpikeThreshold * d.sigma_tilde;
      std::size_t added = 0;
      for (std::size_t t = 1; t < n; ++t) {
        const double jump = incr[t - 1];
        const double tau = static_cast<double>(t);
        const bool known = std::find(d.jump_events.times.begin(), d.jump_events.times.end(),
                                     tau) != d.jump_events.times.end();
        if (!known && std::abs(jump) > threshold) {
          d.jump_events.times.push_back(tau);
          d.jump_events.marks.push_back(jump);
          ++added;
        }
      }
      if (added == 0) break;
      std::vector<std::size_t> order(d.jump_events.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return d.jump_events.times[a] < d.jump_events.times[b];
      });
      EventStream sorted;
      sorted.horizon = d.jump_events.horizon;
      for (std::size_t i : order) {
        sorted.times.push_back(d.jump_events.times[i]);
        sorted.marks.push_back(d.jump_events.marks[i]);
      }
      d.jump_events = std::move(sorted);
      d.y_j = reconstruct_jump_series(d.jump_events, d.alpha2_hat, n);
    }
  }

  d.y_s.resize(n);
  for (std::size_t t = 0; t < n; ++t) d.y_s[t] = d.y_w[t] - d.y_j[t];

  if (config.extend_horizon > 0) {
    const std::vector<double> trend =
        extend_trend(d.y_s, config.extend_horizon, config.theta, config.wavelet_level);
    d.f_l.assign(trend.begin(), trend.begin() + static_cast<std::ptrdiff_t>(n));
    d.f_l_ext.assign(trend.begin() + static_cast<std::ptrdiff_t>(n), trend.end());
  } else {
    d.f_l = wavelet_trend(d.y_s, config.wavelet_level);
  }

  d.y_f.resize(n);
  for (std::size_t t = 0; t < n; ++t) d.y_f[t] = d.y_s[t] - d.f_l[t];
  return d;
}

void write_decomposition_csv(const Decomposition& d, const PriceSeries& series,
                             const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "t,y,f_s,f_l,y_j,y_f\n";
  out.precision(12);
  for (std::size_t t = 0; t < series.size(); ++t)
    out << t << ',' << series.values[t] << ',' << d.f_s[t] << ',' << d.f_l[t] << ',' << d.y_j[t]
        << ',' << d.y_f[t] << '\n';
}

}  // namespace epf
