#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "epf/errors.hpp"
#include "epf/gev.hpp"

namespace epf {

/// Exponential-kernel Hawkes intensity parameters:
/// lambda_t = lambda0 + gamma sum_{T_i < t} exp(-beta (t - T_i)).
struct HawkesParams {
  double lambda0 = 0.01;
  double gamma = 0.0;
  double beta = 0.0;

  /// Enforces lambda0 > 0 and the stationarity condition (gamma < beta, or
  /// gamma == 0). Throws InvalidParams / NonStationary.
  void validate() const;

  double branching_ratio() const { return beta > 0.0 ? gamma / beta : 0.0; }
};

/// Marked jump events observed on [0, horizon].
struct EventStream {
  std::vector<double> times;
  std::vector<double> marks;
  double horizon = 0.0;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  /// Checks 0 < T_1 < ... < T_n <= horizon and finite nonzero marks.
  void validate() const;
};

/// Left-continuous intensity at t: events at exactly t are excluded, matching
/// the thinning construction.
double intensity_at(const HawkesParams& p, const EventStream& events, double t);

struct HawkesSimOptions {
  /// Transient excess (lambda* - lambda0) decaying at rate beta. The default
  /// zero is the stationary form.
  double initial_intensity_excess = 0.0;
};

/// Ogata thinning with i.i.d. GEV marks. Throws NonStationary when
/// gamma >= beta > 0.
EventStream simulate_hawkes(const HawkesParams& p, const GevParams& mark_dist, double horizon,
                            std::uint64_t seed, const HawkesSimOptions& options = {});

/// Collapses continuous event times onto the daily observation grid, one
/// event per day, the way the spike detector records them: an event in
/// (d-1, d] shows up on day d.
EventStream observe_daily(const EventStream& events);

/// Ozaki log-likelihood of the jump times:
/// L = -lambda T_n + sum_j (gamma/beta)(e^{-beta(T_n - T_j)} - 1)
///   + sum_j log(lambda + gamma A(j)),
/// evaluated in O(n) via A(j) = e^{-beta(T_j - T_{j-1})}(1 + A(j-1)).
double hawkes_loglik(const HawkesParams& p, const EventStream& events);

struct HawkesDerivatives {
  std::array<double, 3> gradient{};               // d/d(lambda, gamma, beta)
  std::array<std::array<double, 3>, 3> hessian{};  // same ordering
};

/// Analytic gradient and Hessian of hawkes_loglik using the A/B/C recursions.
HawkesDerivatives hawkes_loglik_derivatives(const HawkesParams& p, const EventStream& events);

struct HawkesFitOptions {
  int jittered_starts = 3;
  int max_iterations = 300;
  std::uint64_t seed = 0x9e3779b9u;  // drives the start jitter only
};

/// Constrained MLE on (log lambda, log gamma, log(beta - gamma)); the returned
/// likelihood is never below the Poisson fit (lambda = n/T_n, gamma = 0).
/// Throws InsufficientData (< 3 events) and FitError on total failure.
HawkesParams hawkes_fit_mle(const EventStream& events, const HawkesFitOptions& options = {});

/// Mean-reverting jump component driven by the marked Hawkes stream.
struct Jump2Params {
  double alpha2 = 0.5;
  HawkesParams hawkes{};
  GevParams mark_dist{};

  void validate() const;
};

/// Exact piecewise solution sampled at integer days t = 0..n_days-1:
/// X2 decays as e^{-alpha2 dt} between events and jumps by the mark at each
/// event time. x2_0 is the state at t = 0.
std::vector<double> simulate_x2(const Jump2Params& p, const EventStream& events,
                                std::size_t n_days, double x2_0 = 0.0);

/// CSV dump `time,mark` for inspection.
void write_events_csv(const EventStream& events, const std::filesystem::path& path);

}  // namespace epf
