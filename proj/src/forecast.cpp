#include "epf/forecast.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <thread>

#include <json.hpp>

#include "epf/fgn.hpp"
#include "epf/fracest.hpp"
#include "epf/rng.hpp"
#include "epf/stats.hpp"

namespace epf {

namespace {

using nlohmann::json;

// Fixed simulation defaults; the last-resort fallback when a window gives the
// estimators nothing to work with.
const FouParams kDefaultFou{0.1, 6.0, 0.5, 0.0};
const HawkesParams kDefaultHawkes{0.01, 0.0, 0.0};
const GevParams kDefaultGev{18.0, 2.0, 0.7};

// Seed stream tags so each consumer of the per-origin seed is independent.
constexpr std::uint64_t kStreamFgn = 0xF61;
constexpr std::uint64_t kStreamHawkes = 0x4A3;
constexpr std::uint64_t kStreamNaive = 0x27D;

void run_parallel(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  pool.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

std::array<double, 99> quantile_grid(std::vector<double>& samples) {
  std::sort(samples.begin(), samples.end());
  std::array<double, 99> q{};
  for (int p = 1; p <= 99; ++p)
    q[static_cast<std::size_t>(p - 1)] =
        quantile_sorted(samples, static_cast<double>(p) / 100.0);
  return q;
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::fbm: return "fbm";
    case Variant::sbm: return "sbm";
    case Variant::naive: return "naive";
  }
  return "fbm";
}

Variant variant_from_string(const std::string& name) {
  if (name == "fbm") return Variant::fbm;
  if (name == "sbm") return Variant::sbm;
  if (name == "naive") return Variant::naive;
  throw InvalidParams("unknown variant '" + name + "' (expected fbm|sbm|naive)");
}

ModelParams calibrate_window(const Decomposition& decomp, std::optional<double> force_hurst,
                             const ModelParams* previous) {
  ModelParams out;
  out.jump.alpha2 = decomp.alpha2_hat;

  try {
    const FracEstimates est =
        estimate_fou_params(decomp.y_f, force_hurst ? *force_hurst : -1.0);
    // An explicit Euler day step needs alpha1 < 1 to stay stable; treat
    // anything outside as a failed window.
    if (!(est.alpha1_hat > 0.0 && est.alpha1_hat < 1.0) || !(est.sigma_hat > 0.0))
      throw FitError("fOU estimates outside the usable range");
    out.fou.alpha1 = est.alpha1_hat;
    out.fou.sigma = est.sigma_hat;
    out.fou.hurst = est.hurst_hat;
    out.hurst_clamped = est.hurst_clamped;
  } catch (const Error&) {
    out.fou = previous ? previous->fou : kDefaultFou;
    if (force_hurst) out.fou.hurst = *force_hurst;
    out.fou_fallback = true;
  }

  if (decomp.jump_events.size() >= 3) {
    try {
      out.jump.hawkes = hawkes_fit_mle(decomp.jump_events);
    } catch (const Error&) {
      out.jump.hawkes = previous ? previous->jump.hawkes : kDefaultHawkes;
      out.hawkes_fallback = true;
    }
  } else {
    out.jump.hawkes = previous ? previous->jump.hawkes : kDefaultHawkes;
    out.hawkes_fallback = true;
  }

  if (decomp.jump_events.size() >= 5) {
    try {
      out.jump.mark_dist = gev_fit_mle(decomp.jump_events.marks);
    } catch (const Error&) {
      out.jump.mark_dist = previous ? previous->jump.mark_dist : kDefaultGev;
      out.gev_fallback = true;
    }
  } else {
    out.jump.mark_dist = previous ? previous->jump.mark_dist : kDefaultGev;
    out.gev_fallback = true;
  }
  return out;
}

ForecastDistribution forecast_distribution(const ModelParams& params,
                                           const Decomposition& decomp, int h, int target_label,
                                           std::size_t n_paths, std::uint64_t seed) {
  if (h < 1) throw InvalidParams("horizon must be >= 1");
  if (decomp.f_l_ext.size() < static_cast<std::size_t>(h))
    throw InvalidParams("decomposition trend extension shorter than the horizon");
  if (n_paths == 0) throw InvalidParams("need at least one Monte-Carlo path");
  if (target_label < 1 || target_label > 8) throw InvalidParams("target label must be 1..8");

  const double f_s =
      decomp.label_means[static_cast<std::size_t>(target_label - 1)] - decomp.mean_price;
  const double f_l = decomp.f_l_ext[static_cast<std::size_t>(h - 1)];
  const double x1_anchor = decomp.y_f.back();
  const double x2_anchor = decomp.y_j.back();
  const double alpha2 = params.jump.alpha2;

  FouParams fou = params.fou;
  fou.x0 = x1_anchor;

  const FgnGenerator gen(fou.hurst, static_cast<std::size_t>(h));
  const auto noise = gen.sample_batch(derive_seed(seed, kStreamFgn), n_paths);

  std::vector<double> samples;
  samples.reserve(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    const auto x1_path = simulate_fou(fou, static_cast<std::size_t>(h), 1.0, noise[i]);
    const double x1 = x1_path.back();

    double x2 = x2_anchor * std::exp(-alpha2 * static_cast<double>(h));
    const EventStream events =
        simulate_hawkes(params.jump.hawkes, params.jump.mark_dist, static_cast<double>(h),
                        derive_seed(seed, kStreamHawkes, i));
    for (std::size_t j = 0; j < events.size(); ++j)
      x2 += events.marks[j] * std::exp(-alpha2 * (static_cast<double>(h) - events.times[j]));

    samples.push_back(f_s + f_l + x1 + x2);
  }

  ForecastDistribution dist;
  dist.horizon = h;
  dist.n_paths = n_paths;
  dist.quantiles = quantile_grid(samples);
  return dist;
}

ForecastDistribution naive_forecast(const PriceSeries& series, std::size_t origin_index,
                                    std::size_t window_length, int h, std::size_t n_paths,
                                    std::uint64_t seed) {
  if (h < 1) throw InvalidParams("horizon must be >= 1");
  if (origin_index + 1 < window_length) throw InsufficientData("window exceeds available data");
  if (origin_index + static_cast<std::size_t>(h) >= series.size())
    throw InsufficientData("target beyond series end");

  const PriceSeries win = series.window(origin_index + 1 - window_length, window_length);
  const WeeklyProfile profile = weekly_profile(win);

  std::vector<double> residuals(win.size());
  for (std::size_t t = 0; t < win.size(); ++t)
    residuals[t] = win.values[t] - profile.dummies[t];

  const int target_label = series.labels[origin_index + static_cast<std::size_t>(h)];
  const double base = profile.label_means[static_cast<std::size_t>(target_label - 1)];

  auto engine = make_engine(derive_seed(seed, kStreamNaive));
  std::uniform_int_distribution<std::size_t> pick(0, residuals.size() - 1);
  std::vector<double> samples;
  samples.reserve(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) samples.push_back(base + residuals[pick(engine)]);

  ForecastDistribution dist;
  dist.origin_date = series.date_at(origin_index);
  dist.horizon = h;
  dist.n_paths = n_paths;
  dist.quantiles = quantile_grid(samples);
  return dist;
}

void BacktestConfig::validate() const {
  if (window_length < 256) throw InvalidParams("window_length must be >= 256");
  if (n_paths == 0) throw InvalidParams("n_paths must be >= 1");
  for (int h : horizons)
    if (h < 1 || h > 30) throw InvalidParams("horizons must lie in [1,30]");
}

std::vector<int> BacktestConfig::effective_horizons() const {
  if (!horizons.empty()) return horizons;
  std::vector<int> all(30);
  for (int h = 1; h <= 30; ++h) all[static_cast<std::size_t>(h - 1)] = h;
  return all;
}

std::vector<ForecastRecord> rolling_backtest(const PriceSeries& series,
                                             const BacktestConfig& config) {
  config.validate();
  const std::vector<int> horizons = config.effective_horizons();
  if (horizons.empty()) throw InvalidParams("no horizons requested");

  const std::size_t n = series.size();
  const std::size_t w = config.window_length;
  const int max_h = *std::max_element(horizons.begin(), horizons.end());
  if (n < w + static_cast<std::size_t>(max_h))
    throw InsufficientData("series shorter than window + max horizon");

  const std::optional<double> force_hurst =
      config.variant == Variant::sbm ? std::optional<double>(0.5) : config.force_hurst;

  struct Task {
    int horizon;
    std::size_t origin;
    std::size_t lane_pos;  // position within the horizon lane
  };
  std::vector<Task> tasks;
  std::vector<std::vector<std::size_t>> lanes(horizons.size());
  for (std::size_t li = 0; li < horizons.size(); ++li) {
    const auto h = static_cast<std::size_t>(horizons[li]);
    std::size_t lane_pos = 0;
    for (std::size_t origin = w - 1; origin + h < n; origin += h) {
      lanes[li].push_back(tasks.size());
      tasks.push_back(Task{horizons[li], origin, lane_pos++});
    }
  }

  std::vector<ForecastRecord> records(tasks.size());

  if (config.variant == Variant::naive) {
    run_parallel(tasks.size(), config.threads, [&](std::size_t i) {
      const Task& task = tasks[i];
      const std::uint64_t seed =
          derive_seed(config.seed, static_cast<std::uint64_t>(task.horizon), task.origin);
      ForecastDistribution dist = naive_forecast(series, task.origin, w,
                                                 task.horizon, config.n_paths, seed);
      ForecastRecord rec;
      rec.variant = config.variant;
      rec.horizon = task.horizon;
      rec.origin_index = task.origin;
      rec.origin_date = series.date_at(task.origin);
      rec.quantiles = dist.quantiles;
      rec.realized = series.values[task.origin + static_cast<std::size_t>(task.horizon)];
      records[i] = std::move(rec);
    });
    return records;
  }

  // Phase 1: decompose + calibrate every window independently.
  std::vector<Decomposition> decomps(tasks.size());
  std::vector<ModelParams> params(tasks.size());
  std::vector<char> calibrated(tasks.size(), 0);
  run_parallel(tasks.size(), config.threads, [&](std::size_t i) {
    const Task& task = tasks[i];
    DecomposeConfig dc = config.decompose;
    dc.extend_horizon = std::max<std::size_t>(dc.extend_horizon,
                                              static_cast<std::size_t>(task.horizon));
    const PriceSeries win = series.window(task.origin + 1 - w, w);
    decomps[i] = decompose(win, dc);
    params[i] = calibrate_window(decomps[i], force_hurst, nullptr);
    params[i].window_id = task.lane_pos;
    calibrated[i] = 1;
  });

  // Phase 2: resolve fallbacks along each lane in origin order, replacing a
  // failed stage with the previous window's estimates.
  for (const auto& lane : lanes) {
    const ModelParams* prev = nullptr;
    for (std::size_t idx : lane) {
      ModelParams& p = params[idx];
      if (prev) {
        if (p.fou_fallback) {
          const double hurst = p.fou.hurst;  // keep a forced H
          p.fou = prev->fou;
          if (force_hurst) p.fou.hurst = hurst;
        }
        if (p.hawkes_fallback) p.jump.hawkes = prev->jump.hawkes;
        if (p.gev_fallback) p.jump.mark_dist = prev->jump.mark_dist;
      }
      prev = &p;
    }
  }

  // Phase 3: Monte-Carlo forecasts.
  run_parallel(tasks.size(), config.threads, [&](std::size_t i) {
    const Task& task = tasks[i];
    const std::uint64_t seed =
        derive_seed(config.seed, static_cast<std::uint64_t>(task.horizon), task.origin);
    const std::size_t target = task.origin + static_cast<std::size_t>(task.horizon);
    ForecastDistribution dist = forecast_distribution(
        params[i], decomps[i], task.horizon, series.labels[target], config.n_paths, seed);
    ForecastRecord rec;
    rec.variant = config.variant;
    rec.horizon = task.horizon;
    rec.origin_index = task.origin;
    rec.origin_date = series.date_at(task.origin);
    rec.quantiles = dist.quantiles;
    rec.realized = series.values[target];
    rec.params = params[i];
    records[i] = std::move(rec);
  });
  return records;
}

std::vector<ScoredForecast> to_scored(std::span<const ForecastRecord> records) {
  std::vector<ScoredForecast> out;
  out.reserve(records.size());
  for (const auto& r : records)
    out.push_back(ScoredForecast{to_string(r.variant), r.horizon, r.quantiles, r.realized});
  return out;
}

void write_forecasts_json(std::span<const ForecastRecord> records,
                          const std::filesystem::path& path) {
  json root = json::array();
  for (const auto& r : records) {
    json j;
    j["origin"] = format_date(r.origin_date);
    j["horizon"] = r.horizon;
    j["variant"] = to_string(r.variant);
    j["quantiles"] = r.quantiles;
    j["realized"] = r.realized;
    root.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << root.dump(2) << '\n';
}

std::vector<ScoredForecast> read_forecasts_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  json root = json::parse(in);
  std::vector<ScoredForecast> out;
  for (const auto& j : root) {
    ScoredForecast f;
    f.variant = j.at("variant").get<std::string>();
    f.horizon = j.at("horizon").get<int>();
    const auto q = j.at("quantiles").get<std::vector<double>>();
    if (q.size() != 99) throw ParseError("expected 99 quantiles", 0);
    std::copy(q.begin(), q.end(), f.quantiles.begin());
    f.realized = j.at("realized").get<double>();
    out.push_back(std::move(f));
  }
  return out;
}

void write_params_csv(std::span<const ForecastRecord> records,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "variant,horizon,origin,hurst,sigma,alpha1,alpha2,lambda,gamma,beta,branching_ratio,"
         "gev_mu,gev_sigma,gev_xi\n";
  out.precision(10);
  for (const auto& r : records) {
    if (r.variant == Variant::naive) continue;
    const auto& p = r.params;
    out << to_string(r.variant) << ',' << r.horizon << ',' << format_date(r.origin_date) << ','
        << p.fou.hurst << ',' << p.fou.sigma << ',' << p.fou.alpha1 << ',' << p.jump.alpha2
        << ',' << p.jump.hawkes.lambda0 << ',' << p.jump.hawkes.gamma << ','
        << p.jump.hawkes.beta << ',' << p.jump.hawkes.branching_ratio() << ','
        << p.jump.mark_dist.mu << ',' << p.jump.mark_dist.sigma << ',' << p.jump.mark_dist.xi
        << '\n';
  }
}

}  // namespace epf
