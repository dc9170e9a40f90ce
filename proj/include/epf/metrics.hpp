#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "epf/errors.hpp"

namespace epf {

struct CoverageResult {
  double rate = 0.0;
  double error = 0.0;      // rate - nominal
  double abs_error = 0.0;  // |rate - nominal|
};

/// Fraction of realized values inside their prediction intervals.
CoverageResult unconditional_coverage(std::span<const double> lower,
                                      std::span<const double> upper,
                                      std::span<const double> realized, double level);

/// Interval width plus a miscoverage-scaled penalty:
///   delta                          if realized inside,
///   delta + 2/(1-c) (P - U)        above,
///   delta + 2/(1-c) (L - P)        below.
double winkler_score(double lower, double upper, double realized, double coverage);

/// Quantile check loss: (1-q)(Q - P) for P < Q, q (P - Q) otherwise.
double pinball(double q_forecast, double realized, double q);

/// Pinball averaged uniformly over the 99 percent quantiles.
double mean_pinball(const std::array<double, 99>& quantiles, double realized);

struct HorizonScores {
  int horizon = 0;
  std::size_t n_pairs = 0;
  std::map<int, CoverageResult> coverage;  // keyed by percent level (50/90/98)
  double winkler50 = 0.0;
  double winkler90 = 0.0;
  double pinball_mean = 0.0;
};

struct VariantReport {
  std::string variant;
  std::vector<HorizonScores> per_horizon;
  std::map<int, CoverageResult> coverage_avg;  // averaged over horizons
  double winkler50_avg = 0.0;
  double winkler90_avg = 0.0;
  double pinball_avg = 0.0;
};

struct EvaluationReport {
  std::vector<VariantReport> variants;

  const VariantReport* find(const std::string& name) const;
};

/// One scored forecast/realization pair: the 99 quantiles and the outcome.
struct ScoredForecast {
  std::string variant;
  int horizon = 0;
  std::array<double, 99> quantiles{};
  double realized = 0.0;
};

/// Per-horizon score curves plus horizon-averaged summary rows.
/// Throws EmptyInput when no pairs are supplied.
EvaluationReport aggregate_report(std::span<const ScoredForecast> pairs);

void write_report_json(const EvaluationReport& report, const std::filesystem::path& path);

/// Table layout: rows UC50/90/98 with errors, WS50, WS90, PLF; one column per
/// variant.
void write_report_csv(const EvaluationReport& report, const std::filesystem::path& path);

}  // namespace epf
