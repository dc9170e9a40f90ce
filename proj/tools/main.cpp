#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epf/fgn.hpp"
#include "epf/filter.hpp"
#include "epf/forecast.hpp"
#include "epf/fou.hpp"
#include "epf/hawkes.hpp"
#include "epf/metrics.hpp"
#include "epf/rng.hpp"
#include "epf/series.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "epf 1.0.0";

// Exit codes: 0 success, 2 invalid parameters, 3 data/pipeline errors.
constexpr int kExitBadParams = 2;
constexpr int kExitDataError = 3;

/// "1,7,30" or "1-30" or a mix ("1-5,10").
std::vector<int> parse_horizons(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string token =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    const std::size_t dash = token.find('-');
    if (dash == std::string::npos) {
      out.push_back(std::stoi(token));
    } else {
      const int lo = std::stoi(token.substr(0, dash));
      const int hi = std::stoi(token.substr(dash + 1));
      for (int h = lo; h <= hi; ++h) out.push_back(h);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

epf::HolidayCalendar load_calendar(const std::string& holiday_file) {
  auto cal = epf::HolidayCalendar::italian();
  if (!holiday_file.empty()) cal.add_dates_from_file(holiday_file);
  return cal;
}

struct SimulateArgs {
  double hurst = 0.5;
  double alpha1 = 0.1;
  double sigma = 6.0;
  double alpha2 = 0.5;
  double lambda = 0.01;
  double gamma = 0.0;
  double beta = 0.0;
  double gev_mu = 18.0;
  double gev_sigma = 2.0;
  double gev_xi = 0.7;
  std::size_t days = 730;
  std::uint64_t seed = 1;
  std::string output_dir = ".";
};

int cmd_simulate(const SimulateArgs& a) {
  const epf::FouParams fou{a.alpha1, a.sigma, a.hurst, 0.0};
  fou.validate();
  const epf::HawkesParams hawkes{a.lambda, a.gamma, a.beta};
  hawkes.validate();
  const epf::GevParams gev{a.gev_mu, a.gev_sigma, a.gev_xi};
  gev.validate();
  const epf::Jump2Params jump{a.alpha2, hawkes, gev};
  jump.validate();

  const auto noise = epf::sample_fgn({a.hurst, a.days, epf::derive_seed(a.seed, 1)});
  const auto x1 = epf::simulate_fou(fou, a.days, 1.0, noise);
  const auto events = epf::simulate_hawkes(hawkes, gev, static_cast<double>(a.days),
                                           epf::derive_seed(a.seed, 2));
  const auto x2 = epf::simulate_x2(jump, events, a.days + 1);

  fs::create_directories(a.output_dir);
  const fs::path out_path = fs::path(a.output_dir) / "simulation.csv";
  std::ofstream out(out_path);
  if (!out) throw epf::Error("cannot write " + out_path.string());
  out << "t,x1,x2,x,intensity\n";
  out.precision(12);
  for (std::size_t t = 1; t <= a.days; ++t) {
    const double intensity = epf::intensity_at(hawkes, events, static_cast<double>(t));
    out << t << ',' << x1[t] << ',' << x2[t] << ',' << x1[t] + x2[t] << ',' << intensity
        << '\n';
  }
  epf::write_events_csv(events, fs::path(a.output_dir) / "events.csv");
  std::cout << "wrote " << out_path.string() << " (" << a.days << " rows, " << events.size()
            << " jump events)\n";
  return 0;
}

struct DecomposeArgs {
  std::string input;
  std::string output_dir = ".";
  std::string holiday_file;
  int level = 8;
  double theta = 0.985;
  std::size_t extend = 0;
  bool iterate_spikes = false;
};

int cmd_decompose(const DecomposeArgs& a) {
  const auto cal = load_calendar(a.holiday_file);
  const epf::PriceSeries series = epf::load_csv(a.input, cal);

  epf::DecomposeConfig cfg;
  cfg.wavelet_level = a.level;
  cfg.theta = a.theta;
  cfg.extend_horizon = a.extend;
  cfg.iterate_spikes = a.iterate_spikes;
  const epf::Decomposition dec = epf::decompose(series, cfg);

  fs::create_directories(a.output_dir);
  epf::write_decomposition_csv(dec, series, fs::path(a.output_dir) / "decomposition.csv");
  epf::write_events_csv(dec.jump_events, fs::path(a.output_dir) / "events.csv");

  json j;
  j["alpha2_hat"] = dec.alpha2_hat;
  j["alpha2_clamped"] = dec.alpha2_clamped;
  j["jump_count"] = dec.jump_events.size();
  j["sigma_tilde"] = dec.sigma_tilde;
  j["mean_price"] = dec.mean_price;
  std::ofstream jout(fs::path(a.output_dir) / "decomposition.json");
  jout << j.dump(2) << '\n';

  std::cout << "decomposed " << series.size() << " days: " << dec.jump_events.size()
            << " jumps, alpha2 " << dec.alpha2_hat << ", sigma_tilde " << dec.sigma_tilde
            << "\n";
  return 0;
}

struct BacktestArgs {
  std::string input;
  std::string output_dir = ".";
  std::string holiday_file;
  std::vector<std::string> variants{"fbm", "sbm", "naive"};
  std::string horizons = "1-30";
  std::size_t window = 730;
  std::size_t paths = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  int level = 8;
  double theta = 0.985;
};

int cmd_backtest(const BacktestArgs& a) {
  const auto cal = load_calendar(a.holiday_file);
  const epf::PriceSeries series = epf::load_csv(a.input, cal);

  std::vector<epf::ForecastRecord> all;
  for (const std::string& name : a.variants) {
    epf::BacktestConfig cfg;
    cfg.window_length = a.window;
    cfg.horizons = parse_horizons(a.horizons);
    cfg.n_paths = a.paths;
    cfg.variant = epf::variant_from_string(name);
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    cfg.decompose.wavelet_level = a.level;
    cfg.decompose.theta = a.theta;
    auto records = epf::rolling_backtest(series, cfg);
    all.insert(all.end(), records.begin(), records.end());
    std::cout << name << ": " << records.size() << " forecasts\n";
  }

  fs::create_directories(a.output_dir);
  epf::write_forecasts_json(all, fs::path(a.output_dir) / "forecasts.json");
  epf::write_params_csv(all, fs::path(a.output_dir) / "params.csv");

  const auto report = epf::aggregate_report(epf::to_scored(all));
  epf::write_report_json(report, fs::path(a.output_dir) / "report.json");
  epf::write_report_csv(report, fs::path(a.output_dir) / "report.csv");
  std::cout << "wrote forecasts.json, params.csv, report.json, report.csv under "
            << a.output_dir << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string input;
  std::string output_dir = ".";
};

int cmd_evaluate(const EvaluateArgs& a) {
  const auto scored = epf::read_forecasts_json(a.input);
  const auto report = epf::aggregate_report(scored);
  fs::create_directories(a.output_dir);
  epf::write_report_json(report, fs::path(a.output_dir) / "report.json");
  epf::write_report_csv(report, fs::path(a.output_dir) / "report.csv");
  for (const auto& v : report.variants)
    std::cout << v.variant << ": UC90 " << v.coverage_avg.at(90).rate << "  WS50 "
              << v.winkler50_avg << "  WS90 " << v.winkler90_avg << "  PLF " << v.pinball_avg
              << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-factor electricity price model: simulation, filtering, forecasting"};
  app.set_help_flag("--help", "print help and exit");  // frees -h/--h for the Hurst option
  app.set_version_flag("--version", kVersion);
  app.set_config("--config");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate X = X1 + X2 paths");
  simulate->add_option("--h,--hurst", sim.hurst, "Hurst exponent in (0,1)");
  simulate->add_option("--alpha1", sim.alpha1, "base mean-reversion rate");
  simulate->add_option("--sigma", sim.sigma, "base diffusion scale");
  simulate->add_option("--alpha2", sim.alpha2, "jump mean-reversion rate");
  simulate->add_option("--lambda", sim.lambda, "Hawkes background intensity");
  simulate->add_option("--gamma", sim.gamma, "Hawkes excitation jump");
  simulate->add_option("--beta", sim.beta, "Hawkes excitation decay");
  simulate->add_option("--gev-mu", sim.gev_mu, "mark location");
  simulate->add_option("--gev-sigma", sim.gev_sigma, "mark scale");
  simulate->add_option("--gev-xi", sim.gev_xi, "mark shape");
  simulate->add_option("--days", sim.days, "simulation length in days");
  simulate->add_option("--seed", sim.seed, "root RNG seed");
  simulate->add_option("--output-dir", sim.output_dir, "output directory");

  DecomposeArgs dc;
  auto* decompose = app.add_subcommand("decompose", "Filter a price series into components");
  decompose->add_option("--input", dc.input, "CSV with date,price")->required();
  decompose->add_option("--output-dir", dc.output_dir, "output directory");
  decompose->add_option("--holidays", dc.holiday_file, "extra holiday dates, one per line");
  decompose->add_option("--level", dc.level, "wavelet decomposition level");
  decompose->add_option("--theta", dc.theta, "median-reversion decay for the extension");
  decompose->add_option("--extend", dc.extend, "days of trend extension");
  decompose->add_flag("--iterate-spikes", dc.iterate_spikes,
                      "repeat spike detection on the residual");

  BacktestArgs bt;
  auto* backtest = app.add_subcommand("backtest", "Rolling-window interval forecasts");
  backtest->add_option("--input", bt.input, "CSV with date,price")->required();
  backtest->add_option("--output-dir", bt.output_dir, "output directory");
  backtest->add_option("--holidays", bt.holiday_file, "extra holiday dates");
  backtest->add_option("--variant", bt.variants, "model variants (fbm sbm naive)");
  backtest->add_option("--horizons", bt.horizons, "horizons, e.g. 1-30 or 1,7,30");
  backtest->add_option("--window", bt.window, "calibration window length");
  backtest->add_option("--paths", bt.paths, "Monte-Carlo paths per forecast");
  backtest->add_option("--seed", bt.seed, "root RNG seed");
  backtest->add_option("--threads", bt.threads, "worker threads");
  backtest->add_option("--level", bt.level, "wavelet decomposition level");
  backtest->add_option("--theta", bt.theta, "median-reversion decay");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score a forecasts.json file");
  evaluate->add_option("--input", ev.input, "forecasts.json from backtest")->required();
  evaluate->add_option("--output-dir", ev.output_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadParams;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (decompose->parsed()) return cmd_decompose(dc);
    if (backtest->parsed()) return cmd_backtest(bt);
    if (evaluate->parsed()) return cmd_evaluate(ev);
  } catch (const epf::InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadParams;
  } catch (const epf::NonStationary& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadParams;
  } catch (const epf::InvalidHurst& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadParams;
  } catch (const epf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return 0;
}
