#include "epf/hawkes.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "epf/rng.hpp"

namespace epf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Recursions {
  std::vector<double> a, b, c;
};

// A(j) = sum_{i<j} e^{-beta(T_j-T_i)}, B(j) adds a (T_j-T_i) factor, C(j) a
// squared one. All three satisfy one-step recursions in the inter-event gaps.
Recursions abc_recursions(double beta, std::span<const double> t, bool need_bc) {
  const std::size_t n = t.size();
  Recursions r;
  r.a.assign(n, 0.0);
  if (need_bc) {
    r.b.assign(n, 0.0);
    r.c.assign(n, 0.0);
  }
  for (std::size_t j = 1; j < n; ++j) {
    const double dt = t[j] - t[j - 1];
    const double decay = std::exp(-beta * dt);
    r.a[j] = decay * (1.0 + r.a[j - 1]);
    if (need_bc) {
      r.b[j] = decay * (r.b[j - 1] + dt * (1.0 + r.a[j - 1]));
      r.c[j] = decay * (r.c[j - 1] + 2.0 * dt * r.b[j - 1] + dt * dt * (1.0 + r.a[j - 1]));
    }
  }
  return r;
}

double loglik_impl(double lambda, double gamma, double beta, std::span<const double> t) {
  const std::size_t n = t.size();
  const double tn = t.back();
  double ll = -lambda * tn;
  const Recursions rec = abc_recursions(beta, t, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (gamma != 0.0) ll += gamma / beta * std::expm1(-beta * (tn - t[j]));
    const double s = lambda + gamma * rec.a[j];
    if (s <= 0.0) throw DomainError("lambda + gamma A(j) <= 0 in Hawkes log-likelihood");
    ll += std::log(s);
  }
  return ll;
}

struct GradOnly {
  double loglik;
  std::array<double, 3> grad;
};

GradOnly loglik_grad_impl(double lambda, double gamma, double beta, std::span<const double> t) {
  const std::size_t n = t.size();
  const double tn = t.back();
  const Recursions rec = abc_recursions(beta, t, true);

  GradOnly out{};
  out.loglik = -lambda * tn;
  double d_lambda = -tn, d_gamma = 0.0, d_beta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = tn - t[j];
    const double e = std::exp(-beta * d);
    const double em1 = std::expm1(-beta * d);
    if (gamma != 0.0) out.loglik += gamma / beta * em1;
    const double s = lambda + gamma * rec.a[j];
    if (s <= 0.0) throw DomainError("lambda + gamma A(j) <= 0 in Hawkes log-likelihood");
    out.loglik += std::log(s);
    d_lambda += 1.0 / s;
    d_gamma += em1 / beta + rec.a[j] / s;
    d_beta += -gamma * (d * e / beta + em1 / (beta * beta)) - gamma * rec.b[j] / s;
  }
  out.grad = {d_lambda, d_gamma, d_beta};
  return out;
}

double poisson_loglik(std::size_t n, double tn) {
  const double lambda = static_cast<double>(n) / tn;
  return -lambda * tn + static_cast<double>(n) * std::log(lambda);
}

// ---- MLE in the unconstrained space theta = (log l, log g, log(b - g)) ----

struct FitContext {
  std::span<const double> times;
};

// gamma and beta - gamma are capped at 1/day: daily spike records cannot
// identify faster excitation decay, and the unbounded likelihood has a
// spurious mode at beta -> infinity whenever two events nearly coincide.
std::array<double, 3> decode(const gsl_vector* v) {
  const double l = std::exp(std::clamp(gsl_vector_get(v, 0), -40.0, 40.0));
  const double g = std::exp(std::clamp(gsl_vector_get(v, 1), -40.0, 0.0));
  const double b = g + std::exp(std::clamp(gsl_vector_get(v, 2), -40.0, 0.0));
  return {l, g, b};
}

double fit_f(const gsl_vector* v, void* params) {
  const auto& ctx = *static_cast<const FitContext*>(params);
  const auto [l, g, b] = decode(v);
  return -loglik_impl(l, g, b, ctx.times);
}

void fit_df(const gsl_vector* v, void* params, gsl_vector* grad) {
  const auto& ctx = *static_cast<const FitContext*>(params);
  const auto [l, g, b] = decode(v);
  const GradOnly r = loglik_grad_impl(l, g, b, ctx.times);
  // Chain rule through the log transform; beta = gamma + exp(theta3) couples
  // theta2 to both gamma and beta.
  gsl_vector_set(grad, 0, -l * r.grad[0]);
  gsl_vector_set(grad, 1, -g * (r.grad[1] + r.grad[2]));
  gsl_vector_set(grad, 2, -(b - g) * r.grad[2]);
}

void fit_fdf(const gsl_vector* v, void* params, double* f, gsl_vector* grad) {
  *f = fit_f(v, params);
  fit_df(v, params, grad);
}

}  // namespace

void HawkesParams::validate() const {
  if (!(lambda0 > 0.0)) throw InvalidParams("Hawkes lambda0 must be > 0");
  if (gamma < 0.0 || beta < 0.0) throw InvalidParams("Hawkes gamma, beta must be >= 0");
  if (gamma > 0.0 && gamma >= beta)
    throw NonStationary("gamma = " + std::to_string(gamma) + " must be < beta = " +
                        std::to_string(beta));
}

void EventStream::validate() const {
  if (times.size() != marks.size()) throw InvalidParams("times/marks length mismatch");
  double prev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > prev))
      throw InvalidParams("event times must be strictly increasing and > 0");
    if (!std::isfinite(marks[i]) || marks[i] == 0.0)
      throw InvalidParams("marks must be finite and nonzero");
    prev = times[i];
  }
  if (!times.empty() && times.back() > horizon + 1e-9)
    throw InvalidParams("event beyond the observation horizon");
}

double intensity_at(const HawkesParams& p, const EventStream& events, double t) {
  if (t < 0.0) throw InvalidTime("t must be >= 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < events.times.size() && events.times[i] < t; ++i)
    acc += std::exp(-p.beta * (t - events.times[i]));
  return p.lambda0 + p.gamma * acc;
}

EventStream simulate_hawkes(const HawkesParams& p, const GevParams& mark_dist, double horizon,
                            std::uint64_t seed, const HawkesSimOptions& options) {
  p.validate();
  mark_dist.validate();
  if (horizon < 0.0) throw InvalidTime("horizon must be >= 0");

  EventStream stream;
  stream.horizon = horizon;
  if (horizon == 0.0) return stream;

  auto engine = make_engine(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto open_uniform = [&] {
    double u;
    do {
      u = uniform(engine);
    } while (u <= 0.0 || u >= 1.0);
    return u;
  };

  // Excited mass S = sum e^{-beta (t - T_i)} over accepted events; between
  // events the intensity only decays, so lambda(t current) bounds it.
  double t = 0.0;
  double excited = 0.0;
  double excess = options.initial_intensity_excess;
  while (true) {
    const double bound = p.lambda0 + p.gamma * excited + std::max(excess, 0.0);
    const double wait = -std::log(open_uniform()) / bound;
    t += wait;
    if (t > horizon) break;
    const double decay = std::exp(-p.beta * wait);
    excited *= decay;
    excess *= decay;
    const double intensity = std::max(p.lambda0 + p.gamma * excited + excess, 0.0);
    if (open_uniform() * bound <= intensity) {
      stream.times.push_back(t);
      stream.marks.push_back(gev_quantile(mark_dist, open_uniform()));
      excited += 1.0;
    }
  }
  return stream;
}

EventStream observe_daily(const EventStream& events) {
  EventStream out;
  out.horizon = events.horizon;
  double last_day = 0.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const double day = std::ceil(events.times[i]);
    if (!out.times.empty() && day == last_day) {
      out.marks.back() += events.marks[i];  // same-day events merge additively
      continue;
    }
    out.times.push_back(day);
    out.marks.push_back(events.marks[i]);
    last_day = day;
  }
  return out;
}

double hawkes_loglik(const HawkesParams& p, const EventStream& events) {
  if (events.empty()) throw InsufficientData("log-likelihood needs >= 1 event");
  if (p.gamma != 0.0 && !(p.beta > 0.0))
    throw InvalidParams("beta must be > 0 when gamma != 0");
  return loglik_impl(p.lambda0, p.gamma, p.beta, events.times);
}

HawkesDerivatives hawkes_loglik_derivatives(const HawkesParams& p, const EventStream& events) {
  if (events.empty()) throw InsufficientData("derivatives need >= 1 event");
  if (!(p.beta > 0.0)) throw InvalidParams("derivatives require beta > 0");

  const auto& t = events.times;
  const double tn = t.back();
  const double lambda = p.lambda0, gamma = p.gamma, beta = p.beta;
  const Recursions rec = abc_recursions(beta, t, true);

  HawkesDerivatives out{};
  double d_l = -tn, d_g = 0.0, d_b = 0.0;
  double h_ll = 0.0, h_lg = 0.0, h_lb = 0.0, h_gg = 0.0, h_gb = 0.0, h_bb = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double d = tn - t[j];
    const double e = std::exp(-beta * d);
    const double em1 = std::expm1(-beta * d);
    const double a = rec.a[j], b = rec.b[j], c = rec.c[j];
    const double s = lambda + gamma * a;
    if (s <= 0.0) throw DomainError("lambda + gamma A(j) <= 0 in Hawkes log-likelihood");

    d_l += 1.0 / s;
    d_g += em1 / beta + a / s;
    d_b += -gamma * (d * e / beta + em1 / (beta * beta)) - gamma * b / s;

    h_ll += -1.0 / (s * s);
    h_lg += -a / (s * s);
    h_lb += gamma * b / (s * s);
    h_gg += -(a / s) * (a / s);
    h_gb += -(d * e / beta + em1 / (beta * beta)) + gamma * a * b / (s * s) - b / s;
    h_bb += gamma * (d * d * e / beta + 2.0 * d * e / (beta * beta) +
                     2.0 * em1 / (beta * beta * beta)) +
            gamma * c / s - (gamma * b / s) * (gamma * b / s);
  }

  out.gradient = {d_l, d_g, d_b};
  out.hessian = {{{h_ll, h_lg, h_lb}, {h_lg, h_gg, h_gb}, {h_lb, h_gb, h_bb}}};
  return out;
}

HawkesParams hawkes_fit_mle(const EventStream& events, const HawkesFitOptions& options) {
  if (events.size() < 3) throw InsufficientData("Hawkes MLE needs >= 3 events");
  events.validate();

  const std::size_t n = events.size();
  const double tn = events.times.back();
  const double lambda_init = static_cast<double>(n) / tn;

  FitContext ctx{events.times};
  gsl_multimin_function_fdf func;
  func.n = 3;
  func.f = &fit_f;
  func.df = &fit_df;
  func.fdf = &fit_fdf;
  func.params = &ctx;

  auto engine = make_engine(derive_seed(options.seed, n, static_cast<std::uint64_t>(tn)));
  std::normal_distribution<double> jitter(0.0, 1.0);

  double best_ll = -kInf;
  HawkesParams best{};
  gsl_error_handler_t* old_handler = gsl_set_error_handler_off();

  for (int start = 0; start < std::max(options.jittered_starts, 1); ++start) {
    double l0 = lambda_init;
    double g0 = 0.5 * lambda_init;
    double b0 = 2.0 * g0;
    if (start > 0) {
      l0 *= std::exp(0.5 * jitter(engine));
      g0 *= std::exp(1.0 * jitter(engine));
      b0 = g0 + (b0 - 0.5 * lambda_init) * std::exp(1.5 * jitter(engine));
    }

    gsl_vector* theta = gsl_vector_alloc(3);
    gsl_vector_set(theta, 0, std::log(l0));
    gsl_vector_set(theta, 1, std::log(g0));
    gsl_vector_set(theta, 2, std::log(std::max(b0 - g0, 1e-10)));

    gsl_multimin_fdfminimizer* mini =
        gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, 3);
    int status = gsl_multimin_fdfminimizer_set(mini, &func, theta, 0.1, 0.1);

    if (status == GSL_SUCCESS) {
      for (int iter = 0; iter < options.max_iterations; ++iter) {
        status = gsl_multimin_fdfminimizer_iterate(mini);
        if (status != GSL_SUCCESS) break;
        if (gsl_multimin_test_gradient(mini->gradient, 1e-7) == GSL_SUCCESS) break;
      }
      const auto [l, g, b] = decode(mini->x);
      const double ll = -mini->f;
      // Candidates pinned against the stationarity boundary are degenerate
      // (branching ratio ~ 1) and cannot be simulated; skip them.
      const bool usable = l > 0.0 && g < 0.999 * b && b > g + 1e-12;
      if (usable && std::isfinite(ll) && ll > best_ll) {
        best_ll = ll;
        best = HawkesParams{l, g, b};
      }
    }
    gsl_multimin_fdfminimizer_free(mini);
    gsl_vector_free(theta);
  }
  gsl_set_error_handler(old_handler);

  // The Poisson boundary fit is always admissible; never report worse. It
  // also covers runs where every interior candidate was degenerate.
  const double ll_poisson = poisson_loglik(n, tn);
  if (!std::isfinite(ll_poisson))
    throw FitError("Hawkes MLE failed from every start",
                   {lambda_init, 0.5 * lambda_init, lambda_init});
  if (!std::isfinite(best_ll) || best_ll < ll_poisson)
    return HawkesParams{lambda_init, 0.0, 0.0};
  return best;
}

void Jump2Params::validate() const {
  if (!(alpha2 > 0.0)) throw InvalidParams("alpha2 must be > 0");
  hawkes.validate();
  mark_dist.validate();
}

std::vector<double> simulate_x2(const Jump2Params& p, const EventStream& events,
                                std::size_t n_days, double x2_0) {
  p.validate();
  if (events.horizon + 1e-9 < static_cast<double>(n_days) - 1.0)
    throw InvalidParams("event stream horizon shorter than requested days");

  std::vector<double> path(n_days, 0.0);
  if (n_days == 0) return path;

  double state = x2_0;
  double clock = 0.0;
  std::size_t next_event = 0;
  for (std::size_t day = 0; day < n_days; ++day) {
    const double t = static_cast<double>(day);
    while (next_event < events.times.size() && events.times[next_event] <= t) {
      const double tau = events.times[next_event];
      state = state * std::exp(-p.alpha2 * (tau - clock)) + events.marks[next_event];
      clock = tau;
      ++next_event;
    }
    path[day] = state * std::exp(-p.alpha2 * (t - clock));
  }
  return path;
}

void write_events_csv(const EventStream& events, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "time,mark\n";
  out.precision(12);
  for (std::size_t i = 0; i < events.size(); ++i)
    out << events.times[i] << ',' << events.marks[i] << '\n';
}

}  // namespace epf
