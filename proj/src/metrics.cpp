#include "epf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

namespace epf {

namespace {

using nlohmann::json;

// Central interval at coverage c uses the (1-c)/2 and (1+c)/2 quantiles;
// with the 1..99 percent grid: 50% -> (25, 75), 90% -> (5, 95), 98% -> (1, 99).
std::pair<int, int> central_interval_percents(int level_percent) {
  const int tail = (100 - level_percent) / 2;
  return {tail, 100 - tail};
}

double interval_bound(const std::array<double, 99>& q, int percent) {
  return q[static_cast<std::size_t>(percent - 1)];
}

}  // namespace

CoverageResult unconditional_coverage(std::span<const double> lower,
                                      std::span<const double> upper,
                                      std::span<const double> realized, double level) {
  if (realized.empty()) throw EmptyInput("no forecast pairs to score");
  if (lower.size() != realized.size() || upper.size() != realized.size())
    throw InvalidParams("bound/realized length mismatch");
  std::size_t inside = 0;
  for (std::size_t i = 0; i < realized.size(); ++i) {
    if (lower[i] > upper[i]) throw InvalidInterval("lower bound above upper bound");
    if (realized[i] >= lower[i] && realized[i] <= upper[i]) ++inside;
  }
  CoverageResult r;
  r.rate = static_cast<double>(inside) / static_cast<double>(realized.size());
  r.error = r.rate - level;
  r.abs_error = std::abs(r.error);
  return r;
}

double winkler_score(double lower, double upper, double realized, double coverage) {
  if (lower > upper) throw InvalidInterval("lower bound above upper bound");
  if (!(coverage > 0.0 && coverage < 1.0))
    throw InvalidProbability("coverage must be in (0,1)");
  const double width = upper - lower;
  const double penalty = 2.0 / (1.0 - coverage);
  if (realized > upper) return width + penalty * (realized - upper);
  if (realized < lower) return width + penalty * (lower - realized);
  return width;
}

double pinball(double q_forecast, double realized, double q) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidProbability("quantile level must be in (0,1)");
  if (realized < q_forecast) return (1.0 - q) * (q_forecast - realized);
  return q * (realized - q_forecast);
}

double mean_pinball(const std::array<double, 99>& quantiles, double realized) {
  double acc = 0.0;
  for (int p = 1; p <= 99; ++p)
    acc += pinball(quantiles[static_cast<std::size_t>(p - 1)], realized,
                   static_cast<double>(p) / 100.0);
  return acc / 99.0;
}

EvaluationReport aggregate_report(std::span<const ScoredForecast> pairs) {
  if (pairs.empty()) throw EmptyInput("no scored forecasts");
  static constexpr int kLevels[] = {50, 90, 98};

  std::set<std::string> variant_names;
  for (const auto& p : pairs) variant_names.insert(p.variant);

  EvaluationReport report;
  for (const std::string& name : variant_names) {
    VariantReport vr;
    vr.variant = name;

    std::set<int> horizons;
    for (const auto& p : pairs)
      if (p.variant == name) horizons.insert(p.horizon);

    for (int h : horizons) {
      HorizonScores hs;
      hs.horizon = h;
      std::vector<double> realized;
      std::map<int, std::vector<double>> lows, highs;
      double ws50 = 0.0, ws90 = 0.0, plf = 0.0;
      for (const auto& p : pairs) {
        if (p.variant != name || p.horizon != h) continue;
        realized.push_back(p.realized);
        for (int level : kLevels) {
          const auto [lo_p, hi_p] = central_interval_percents(level);
          lows[level].push_back(interval_bound(p.quantiles, lo_p));
          highs[level].push_back(interval_bound(p.quantiles, hi_p));
        }
        ws50 += winkler_score(interval_bound(p.quantiles, 25), interval_bound(p.quantiles, 75),
                              p.realized, 0.50);
        ws90 += winkler_score(interval_bound(p.quantiles, 5), interval_bound(p.quantiles, 95),
                              p.realized, 0.90);
        plf += mean_pinball(p.quantiles, p.realized);
      }
      hs.n_pairs = realized.size();
      const double n = static_cast<double>(hs.n_pairs);
      hs.winkler50 = ws50 / n;
      hs.winkler90 = ws90 / n;
      hs.pinball_mean = plf / n;
      for (int level : kLevels)
        hs.coverage[level] = unconditional_coverage(lows[level], highs[level], realized,
                                                    static_cast<double>(level) / 100.0);
      vr.per_horizon.push_back(std::move(hs));
    }

    // Horizon-averaged rows, each horizon weighted equally.
    const double nh = static_cast<double>(vr.per_horizon.size());
    for (int level : kLevels) {
      CoverageResult avg;
      for (const auto& hs : vr.per_horizon) avg.rate += hs.coverage.at(level).rate;
      avg.rate /= nh;
      avg.error = avg.rate - static_cast<double>(level) / 100.0;
      double abs_acc = 0.0;
      for (const auto& hs : vr.per_horizon) abs_acc += hs.coverage.at(level).abs_error;
      avg.abs_error = abs_acc / nh;
      vr.coverage_avg[level] = avg;
    }
    for (const auto& hs : vr.per_horizon) {
      vr.winkler50_avg += hs.winkler50;
      vr.winkler90_avg += hs.winkler90;
      vr.pinball_avg += hs.pinball_mean;
    }
    vr.winkler50_avg /= nh;
    vr.winkler90_avg /= nh;
    vr.pinball_avg /= nh;

    report.variants.push_back(std::move(vr));
  }
  return report;
}

const VariantReport* EvaluationReport::find(const std::string& name) const {
  for (const auto& v : variants)
    if (v.variant == name) return &v;
  return nullptr;
}

void write_report_json(const EvaluationReport& report, const std::filesystem::path& path) {
  json root = json::array();
  for (const auto& v : report.variants) {
    json jv;
    jv["variant"] = v.variant;
    jv["winkler50"] = v.winkler50_avg;
    jv["winkler90"] = v.winkler90_avg;
    jv["pinball"] = v.pinball_avg;
    for (const auto& [level, cov] : v.coverage_avg) {
      jv["uc" + std::to_string(level)] = cov.rate;
      jv["uc" + std::to_string(level) + "_error"] = cov.error;
      jv["uc" + std::to_string(level) + "_abs_error"] = cov.abs_error;
    }
    json curves = json::array();
    for (const auto& hs : v.per_horizon) {
      json jh;
      jh["horizon"] = hs.horizon;
      jh["n_pairs"] = hs.n_pairs;
      jh["winkler50"] = hs.winkler50;
      jh["winkler90"] = hs.winkler90;
      jh["pinball"] = hs.pinball_mean;
      for (const auto& [level, cov] : hs.coverage)
        jh["uc" + std::to_string(level)] = cov.rate;
      curves.push_back(std::move(jh));
    }
    jv["per_horizon"] = std::move(curves);
    root.push_back(std::move(jv));
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << root.dump(2) << '\n';
}

void write_report_csv(const EvaluationReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(10);
  out << "score";
  for (const auto& v : report.variants) out << ',' << v.variant;
  out << '\n';

  const auto row = [&](const std::string& name, auto getter) {
    out << name;
    for (const auto& v : report.variants) out << ',' << getter(v);
    out << '\n';
  };
  for (int level : {50, 90, 98}) {
    row("UC" + std::to_string(level),
        [&](const VariantReport& v) { return v.coverage_avg.at(level).rate; });
    row("UC" + std::to_string(level) + "_error",
        [&](const VariantReport& v) { return v.coverage_avg.at(level).error; });
    row("UC" + std::to_string(level) + "_abs_error",
        [&](const VariantReport& v) { return v.coverage_avg.at(level).abs_error; });
  }
  row("WS50", [](const VariantReport& v) { return v.winkler50_avg; });
  row("WS90", [](const VariantReport& v) { return v.winkler90_avg; });
  row("PLF", [](const VariantReport& v) { return v.pinball_avg; });
}

}  // namespace epf
