#include "epf/wavelet.hpp"

#include <algorithm>
#include <cmath>

namespace epf {

namespace {

// Half-sample symmetric extension: ... x1 x0 | x0 x1 ... x_{n-1} | x_{n-1} ...
double reflect_at(std::span<const double> x, long t) {
  const long n = static_cast<long>(x.size());
  while (t < 0 || t >= n) {
    if (t < 0) t = -1 - t;
    if (t >= n) t = 2 * n - 1 - t;
  }
  return x[static_cast<std::size_t>(t)];
}

long coeff_k_min(long taps) { return 1 - taps / 2; }

std::vector<double> highpass(std::span<const double> lo) {
  std::vector<double> hi(lo.size());
  for (std::size_t j = 0; j < lo.size(); ++j)
    hi[j] = ((j % 2 == 0) ? 1.0 : -1.0) * lo[lo.size() - 1 - j];
  return hi;
}

}  // namespace

DwtPair dwt(std::span<const double> x) {
  if (x.size() < 2) throw InsufficientData("dwt input too short");
  const auto lo = daubechies24();
  const auto hi = highpass(lo);
  const long taps = static_cast<long>(lo.size());
  const long n = static_cast<long>(x.size());

  // Keep every shift k whose filter window [2k, 2k+taps-1] touches [0, n-1];
  // that set is exactly what exact reconstruction of the interior requires.
  const long k_min = coeff_k_min(taps);
  const long k_max = (n - 1) / 2;
  const std::size_t m = static_cast<std::size_t>(k_max - k_min + 1);

  DwtPair out;
  out.approx.resize(m);
  out.detail.resize(m);
  for (long k = k_min; k <= k_max; ++k) {
    double a = 0.0, d = 0.0;
    for (long j = 0; j < taps; ++j) {
      const double v = reflect_at(x, 2 * k + j);
      a += lo[static_cast<std::size_t>(j)] * v;
      d += hi[static_cast<std::size_t>(j)] * v;
    }
    out.approx[static_cast<std::size_t>(k - k_min)] = a;
    out.detail[static_cast<std::size_t>(k - k_min)] = d;
  }
  return out;
}

std::vector<double> idwt(std::span<const double> approx, std::span<const double> detail,
                         std::size_t out_len) {
  if (approx.size() != detail.size())
    throw InvalidParams("approx/detail band size mismatch");
  const auto lo = daubechies24();
  const auto hi = highpass(lo);
  const long taps = static_cast<long>(lo.size());
  const long k_min = coeff_k_min(taps);

  std::vector<double> x(out_len, 0.0);
  const long n = static_cast<long>(out_len);
  for (std::size_t i = 0; i < approx.size(); ++i) {
    const long base = 2 * (k_min + static_cast<long>(i));
    const long j_lo = std::max<long>(0L, -base);
    const long j_hi = std::min<long>(taps - 1, n - 1 - base);
    for (long j = j_lo; j <= j_hi; ++j) {
      x[static_cast<std::size_t>(base + j)] +=
          approx[i] * lo[static_cast<std::size_t>(j)] + detail[i] * hi[static_cast<std::size_t>(j)];
    }
  }
  return x;
}

WaveletDecomposition wavedec(std::span<const double> x, int level) {
  if (level < 1) throw InvalidParams("decomposition level must be >= 1");
  if (x.size() < (static_cast<std::size_t>(1) << level))
    throw InsufficientData("series shorter than 2^level");

  WaveletDecomposition dec;
  std::vector<double> current(x.begin(), x.end());
  for (int l = 0; l < level; ++l) {
    dec.lengths.push_back(current.size());
    DwtPair pair = dwt(current);
    dec.details.push_back(std::move(pair.detail));
    current = std::move(pair.approx);
  }
  dec.approx = std::move(current);
  return dec;
}

std::vector<double> waverec(const WaveletDecomposition& dec) {
  std::vector<double> current = dec.approx;
  for (std::size_t l = dec.details.size(); l-- > 0;)
    current = idwt(current, dec.details[l], dec.lengths[l]);
  return current;
}

std::vector<double> wavelet_smooth(std::span<const double> x, int level) {
  WaveletDecomposition dec = wavedec(x, level);
  for (auto& d : dec.details) std::fill(d.begin(), d.end(), 0.0);
  return waverec(dec);
}

}  // namespace epf
