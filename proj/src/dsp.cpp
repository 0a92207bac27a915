#include "gaitid/dsp.hpp"

#include <cmath>
#include <numbers>

#include "gaitid/error.hpp"

namespace gaitid::dsp {

namespace {

using cplx = std::complex<double>;

std::size_t smallest_factor(std::size_t n) {
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return p;
  }
  return n;
}

// exp(-2 pi i num / den) with the exponent reduced mod den first.
// Quarter turns are returned exactly.
cplx twiddle(std::size_t num, std::size_t den) {
  const std::size_t r = num % den;
  if ((4 * r) % den == 0) {
    static const cplx quarter[] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
    return quarter[4 * r / den];
  }
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

std::vector<cplx> direct_dft(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    cplx acc{};
    for (std::size_t k = 0; k < n; ++k) acc += x[k] * twiddle(k * m, n);
    out[m] = acc;
  }
  return out;
}

std::vector<cplx> fft(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  if (n <= 1) return x;
  const std::size_t radix = smallest_factor(n);
  if (radix == n) return direct_dft(x);

  // Decimation in time: `radix` interleaved sub-sequences of length m.
  const std::size_t m = n / radix;
  std::vector<std::vector<cplx>> sub(radix);
  for (std::size_t r = 0; r < radix; ++r) {
    std::vector<cplx> part(m);
    for (std::size_t j = 0; j < m; ++j) part[j] = x[j * radix + r];
    sub[r] = fft(part);
  }

  std::vector<cplx> out(n);
  for (std::size_t q = 0; q < radix; ++q) {
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t bin = k + m * q;
      cplx acc{};
      for (std::size_t r = 0; r < radix; ++r) acc += sub[r][k] * twiddle(r * bin, n);
      out[bin] = acc;
    }
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> dft(std::span<const double> series) {
  std::vector<cplx> x(series.begin(), series.end());
  return fft(x);
}

Spectrum dft_magnitude(std::span<const double> series) {
  const auto coeffs = dft(series);
  Spectrum spec;
  spec.bins.reserve(coeffs.size());
  for (const auto& c : coeffs) spec.bins.push_back(std::abs(c));
  return spec;
}

std::vector<std::size_t> find_peaks(std::span<const double> series) {
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < series.size(); ++i) {
    if (series[i - 1] < series[i] && series[i] > series[i + 1]) peaks.push_back(i);
  }
  return peaks;
}

double spectral_centroid(std::span<const double> series, const Spectrum& spectrum) {
  if (series.size() != spectrum.bins.size()) {
    throw ValidationError("spectral centroid: series and spectrum lengths differ");
  }
  if (series.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) acc += series[k] * spectrum.bins[k];
  return acc / static_cast<double>(series.size());
}

}  // namespace gaitid::dsp
