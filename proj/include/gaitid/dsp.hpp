#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "gaitid/signal_model.hpp"

namespace gaitid::dsp {

/// Forward DFT, X[m] = sum_k x[k] exp(-2 pi i k m / n), any length n >= 1.
/// Mixed-radix Cooley-Tukey; prime-length stages fall back to direct sums.
std::vector<std::complex<double>> dft(std::span<const double> series);

/// Full two-sided magnitude spectrum |X[m]|, m = 0..n-1, DC included.
Spectrum dft_magnitude(std::span<const double> series);

/// Interior strict local maxima: i in [1, n-2] with s[i-1] < s[i] > s[i+1].
/// Plateaus are not peaks; endpoints never are.
std::vector<std::size_t> find_peaks(std::span<const double> series);

/// sum_k series[k] * spectrum.bins[k] / n: time samples weighted by the
/// magnitude bin of the same index. Throws ValidationError on length mismatch.
double spectral_centroid(std::span<const double> series, const Spectrum& spectrum);

}  // namespace gaitid::dsp
