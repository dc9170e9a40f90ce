#include "epf/fgn.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <random>

#include "epf/rng.hpp"

namespace epf {

namespace {

// FFTW planning is not reentrant; execution with per-call arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw InvalidHurst(hurst);
}

}  // namespace

double fgn_autocovariance(double hurst, std::size_t lag) {
  check_hurst(hurst);
  if (lag == 0) return 1.0;
  const double k = static_cast<double>(lag);
  const double two_h = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) + std::pow(k - 1.0, two_h));
}

FgnGenerator::FgnGenerator(double hurst, std::size_t length) : hurst_(hurst), n_(length) {
  check_hurst(hurst);
  if (length == 0) throw InsufficientData("fGn length must be >= 1");

  m_ = std::max<std::size_t>(2, next_pow2(length >= 2 ? 2 * (length - 1) : 2));

  // First circulant row: gamma(0..m/2) mirrored onto the back half.
  std::vector<double> row(m_);
  for (std::size_t j = 0; j <= m_ / 2; ++j) row[j] = fgn_autocovariance(hurst, j);
  for (std::size_t j = m_ / 2 + 1; j < m_; ++j) row[j] = row[m_ - j];

  // Eigenvalues of the circulant are the DFT of its first row (real by symmetry).
  std::vector<double> eig(m_);
  {
    fftw_complex* spectrum = fftw_alloc_complex(m_ / 2 + 1);
    fftw_plan plan = nullptr;
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      plan = fftw_plan_dft_r2c_1d(static_cast<int>(m_), row.data(), spectrum, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
    for (std::size_t j = 0; j <= m_ / 2; ++j) eig[j] = spectrum[j][0];
    for (std::size_t j = m_ / 2 + 1; j < m_; ++j) eig[j] = eig[m_ - j];
    fftw_free(spectrum);
  }

  min_eigenvalue_ = eig[0];
  for (double v : eig) min_eigenvalue_ = std::min(min_eigenvalue_, v);
  // The embedding is nonnegative definite for fGn; anything clearly below zero
  // signals numerical trouble rather than a property of the process.
  constexpr double kTol = 1e-9;
  if (min_eigenvalue_ < -kTol)
    throw EmbeddingError("circulant embedding eigenvalue " + std::to_string(min_eigenvalue_) +
                         " below -1e-9");

  sqrt_eig_.resize(m_);
  for (std::size_t j = 0; j < m_; ++j) {
    const double lambda = eig[j] < 0.0 ? 0.0 : eig[j];
    sqrt_eig_[j] = std::sqrt(lambda / static_cast<double>(m_));
  }
}

std::vector<std::vector<double>> FgnGenerator::sample_batch(std::uint64_t seed,
                                                            std::size_t count) const {
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<std::vector<double>> paths(count);
  if (n_ == 1) {
    for (auto& p : paths) p = {normal(engine)};
    return paths;
  }

  fftw_complex* in = fftw_alloc_complex(m_);
  fftw_complex* out = fftw_alloc_complex(m_);
  fftw_plan plan = nullptr;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(m_), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  }

  const std::size_t half = m_ / 2;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (auto& path : paths) {
    in[0][0] = sqrt_eig_[0] * normal(engine);
    in[0][1] = 0.0;
    in[half][0] = sqrt_eig_[half] * normal(engine);
    in[half][1] = 0.0;
    for (std::size_t j = 1; j < half; ++j) {
      const double a = normal(engine);
      const double b = normal(engine);
      const double s = sqrt_eig_[j] * inv_sqrt2;
      in[j][0] = s * a;
      in[j][1] = s * b;
      in[m_ - j][0] = s * a;
      in[m_ - j][1] = -s * b;
    }
    fftw_execute(plan);
    path.resize(n_);
    for (std::size_t t = 0; t < n_; ++t) path[t] = out[t][0];
  }

  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return paths;
}

std::vector<double> FgnGenerator::sample(std::uint64_t seed) const {
  return sample_batch(seed, 1).front();
}

std::vector<double> sample_fgn(const FgnSpec& spec) {
  FgnGenerator gen(spec.hurst, spec.length);
  return gen.sample(spec.seed);
}

std::vector<double> fbm_from_fgn(std::span<const double> increments) {
  if (increments.empty()) throw EmptyInput("no increments");
  std::vector<double> path(increments.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < increments.size(); ++i) {
    acc += increments[i];
    path[i] = acc;
  }
  return path;
}

}  // namespace epf
