#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "epf/hawkes.hpp"
#include "epf/series.hpp"

namespace epf {

struct WeeklyProfile {
  std::vector<double> dummies;        // Y_D(t), the label mean at each day
  double mean = 0.0;                  // overall mean of the window
  std::array<double, 8> label_means{};
  std::array<bool, 8> label_present{};
};

/// Per-label means (Monday..Sunday plus the holiday label 8). A label that
/// never occurs falls back to the overall mean, flagged in label_present.
WeeklyProfile weekly_profile(const PriceSeries& series);

/// Y_w(t) = Y(t) - (Y_D(t) - mean): removes the average-week deviations while
/// keeping the price level.
std::vector<double> deseasonalize_weekly(const PriceSeries& series);

struct SpikeDetection {
  double alpha2_hat = 0.5;
  bool alpha2_clamped = false;
  double sigma_tilde = 0.0;   // sd of the modified increments
  EventStream events;         // times are window indices, marks the increments
};

/// Spike detection on the weekly-deseasonalized series: estimates the
/// reversion rate from the steepest one-step decay ratio, blends toward the
/// trailing 30-day mean, and flags increments beyond 2.5 sigma of the blended
/// increment series. Throws InsufficientData (< 60) and DegenerateInput
/// (zero increment dispersion).
SpikeDetection detect_spikes(std::span<const double> y_w);

/// Y_J(t) = sum_j mu_j e^{-alpha2 (t - tau_j)} for t >= tau_j, sampled at
/// integer days 0..n_days-1. Identical to simulate_x2 on the same events.
std::vector<double> reconstruct_jump_series(const EventStream& events, double alpha2,
                                            std::size_t n_days);

/// Level-`level` wavelet approximation of the series (Daubechies-24,
/// details zeroed). Output has the input length.
std::vector<double> wavelet_trend(std::span<const double> y_s, int level = 8);

/// Prolongs the series past its last point by exponential reversion to the
/// window median: y(T+j) = m + (y(T) - m) theta^j.
std::vector<double> prolong_to_median(std::span<const double> y, std::size_t horizon,
                                      double theta);

/// wavelet_trend applied to the median-reversion prolongation; returns the
/// trend over the full window + horizon range.
std::vector<double> extend_trend(std::span<const double> y_s, std::size_t horizon, double theta,
                                 int level = 8);

struct DecomposeConfig {
  int wavelet_level = 8;
  double theta = 0.985;          // median-reversion decay per day
  std::size_t extend_horizon = 0;
  bool iterate_spikes = false;   // repeat detection on Y_w - Y_J until stable
};

/// Additive split of a price window. Satisfies, at every t,
///   Y(t) = y_f(t) + f_l(t) + y_j(t) + f_s(t)
/// with f_s = Y_D - mean (machine precision).
struct Decomposition {
  std::vector<double> f_s;     // weekly seasonal deviations
  std::vector<double> f_l;     // long-term wavelet trend
  std::vector<double> y_w;     // after weekly deseasonalization
  std::vector<double> y_j;     // jump component Y_J
  std::vector<double> y_s;     // y_w - y_j
  std::vector<double> y_f;     // base realization y_s - f_l
  std::vector<double> f_l_ext; // trend beyond the window (extend_horizon values)
  double mean_price = 0.0;
  double alpha2_hat = 0.5;
  bool alpha2_clamped = false;
  double sigma_tilde = 0.0;
  EventStream jump_events;
  std::array<double, 8> label_means{};
  std::array<bool, 8> label_present{};
};

/// Full pipeline: weekly profile -> spike detection -> jump removal ->
/// (extended) wavelet trend -> base series. Requires length >= 256.
Decomposition decompose(const PriceSeries& series, const DecomposeConfig& config = {});

/// Plot-ready CSV: t, y, f_s, f_l, y_j, y_f.
void write_decomposition_csv(const Decomposition& d, const PriceSeries& series,
                             const std::filesystem::path& path);

}  // namespace epf
