#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "epf/filter.hpp"
#include "epf/fou.hpp"
#include "epf/hawkes.hpp"
#include "epf/metrics.hpp"
#include "epf/series.hpp"

namespace epf {

enum class Variant { fbm, sbm, naive };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

/// Full parameter set calibrated on one rolling window.
struct ModelParams {
  FouParams fou{};
  Jump2Params jump{};
  std::size_t window_id = 0;
  bool fou_fallback = false;
  bool hawkes_fallback = false;
  bool gev_fallback = false;
  bool hurst_clamped = false;
};

/// Estimates every model parameter from a decomposed window: fOU triple from
/// the base series, Hawkes triple and GEV mark law from the detected jumps,
/// alpha2 from the decomposition. force_hurst pins H (the sBm variant).
/// Stages without enough data (or whose estimators fail) fall back to
/// `previous` when given, else to the fixed simulation defaults, with the
/// corresponding flag set; the function itself never throws on stage failure.
ModelParams calibrate_window(const Decomposition& decomp,
                             std::optional<double> force_hurst = std::nullopt,
                             const ModelParams* previous = nullptr);

/// Empirical forecast distribution at horizon h days past the window end.
struct ForecastDistribution {
  Date origin_date{};
  int horizon = 0;
  std::size_t n_paths = 0;
  std::array<double, 99> quantiles{};  // 1%..99%, nondecreasing

  double quantile_percent(int percent) const {
    return quantiles[static_cast<std::size_t>(percent - 1)];
  }
  /// Central interval bounds: 50% -> (25,75), 90% -> (5,95), 98% -> (1,99).
  double lower(int level_percent) const { return quantile_percent((100 - level_percent) / 2); }
  double upper(int level_percent) const {
    return quantile_percent(100 - (100 - level_percent) / 2);
  }
};

/// Monte-Carlo price distribution: base component restarted from the last
/// decomposed base value, jump state carried forward with fresh Hawkes events
/// superposed, seasonal parts from the window profile and the extended trend.
/// Requires decomp.f_l_ext to reach horizon h.
ForecastDistribution forecast_distribution(const ModelParams& params,
                                           const Decomposition& decomp, int h, int target_label,
                                           std::size_t n_paths, std::uint64_t seed);

/// Benchmark model: dummy level of the target's label plus a residual drawn
/// with replacement from the window's Y - Y_D.
ForecastDistribution naive_forecast(const PriceSeries& series, std::size_t origin_index,
                                    std::size_t window_length, int h, std::size_t n_paths,
                                    std::uint64_t seed);

struct BacktestConfig {
  std::size_t window_length = 730;
  std::vector<int> horizons;  // empty = 1..30
  std::size_t n_paths = 1000;
  Variant variant = Variant::fbm;
  std::uint64_t seed = 0;
  int threads = 1;
  std::optional<double> force_hurst;  // test hook; sbm always behaves as 0.5
  DecomposeConfig decompose{};

  void validate() const;
  std::vector<int> effective_horizons() const;
};

struct ForecastRecord {
  Variant variant = Variant::fbm;
  int horizon = 0;
  std::size_t origin_index = 0;
  Date origin_date{};
  std::array<double, 99> quantiles{};
  double realized = 0.0;
  ModelParams params{};  // meaningful for fbm/sbm
};

/// Rolling backtest: for each horizon h the origins advance in steps of h so
/// evaluation targets come from disjoint intervals. Every origin re-runs the
/// decomposition and calibration on its trailing window. Records are ordered
/// by (horizon, origin). Deterministic for a fixed (series, config, seed),
/// regardless of the thread count.
std::vector<ForecastRecord> rolling_backtest(const PriceSeries& series,
                                             const BacktestConfig& config);

std::vector<ScoredForecast> to_scored(std::span<const ForecastRecord> records);

void write_forecasts_json(std::span<const ForecastRecord> records,
                          const std::filesystem::path& path);
std::vector<ScoredForecast> read_forecasts_json(const std::filesystem::path& path);

/// Per-window calibration dump (one row per fbm/sbm record): estimates plus
/// the gamma/beta branching ratio for histogram comparison.
void write_params_csv(std::span<const ForecastRecord> records,
                      const std::filesystem::path& path);

}  // namespace epf
