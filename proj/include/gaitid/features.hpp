#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gaitid/signal_model.hpp"

namespace gaitid::features {

enum class Domain { time, frequency };
enum class Axis { x, y, z, none };

struct FeatureDescriptor {
  std::string_view name;
  Domain domain;
  Axis axis;
};

/// Canonical 30-slot layout:
///   0-2   time mean x/y/z            3-5   frequency mean x/y/z
///   6-8   time median x/y/z          9-11  frequency median x/y/z
///   12    time magnitude             13    frequency magnitude
///   14,15 time corr xz, yz           16,17 frequency corr xz, yz
///   18-20 peak count x/y/z           21-23 mean peak spacing x/y/z (s)
///   24-26 spectral centroid x/y/z    27-29 mean absolute deviation x/y/z
/// Frequency-domain slots use the two-sided DFT magnitude of each axis.
const std::array<FeatureDescriptor, kFeatureCount>& layout();

/// Slot index for a feature name; throws ValidationError for unknown names.
std::size_t index_of(std::string_view name);

namespace slot {
inline constexpr std::size_t time_mean = 0;
inline constexpr std::size_t freq_mean = 3;
inline constexpr std::size_t time_median = 6;
inline constexpr std::size_t freq_median = 9;
inline constexpr std::size_t time_magnitude = 12;
inline constexpr std::size_t freq_magnitude = 13;
inline constexpr std::size_t time_corr_xz = 14;
inline constexpr std::size_t time_corr_yz = 15;
inline constexpr std::size_t freq_corr_xz = 16;
inline constexpr std::size_t freq_corr_yz = 17;
inline constexpr std::size_t peak_count = 18;
inline constexpr std::size_t peak_spacing = 21;
inline constexpr std::size_t spectral_centroid = 24;
inline constexpr std::size_t mean_abs_deviation = 27;
}  // namespace slot

/// Denominators with |z_mean| <= this are treated as zero.
inline constexpr double kCorrEpsilon = 1e-9;

// Throw ValidationError on empty input.
double mean(std::span<const double> series);
double median(std::span<const double> series);
double mean_abs_deviation(std::span<const double> series);

/// Mean Euclidean norm of (x_k, y_k, z_k) over k. Pass spectrum bins for the
/// frequency-domain variant.
double magnitude(std::span<const double> x, std::span<const double> y, std::span<const double> z);

struct Ratio {
  double value = 0.0;
  bool degenerate = false;
};

/// numerator_mean / z_mean; 0 with `degenerate` set when |z_mean| <= kCorrEpsilon.
Ratio cross_correlation(double numerator_mean, double z_mean);

std::size_t peak_count(std::span<const double> series);

/// Mean gap between successive peaks in seconds; 0 with fewer than two peaks.
double mean_peak_spacing(std::span<const double> series, double rate_hz);

struct Extraction {
  FeatureVector vector;
  std::size_t degenerate_time = 0;  // time-domain corr slots substituted with 0
  std::size_t degenerate_freq = 0;  // frequency-domain corr slots substituted with 0

  std::size_t degenerate_total() const noexcept { return degenerate_time + degenerate_freq; }
};

/// Throws ValidationError when the window is shorter than 2 samples or the
/// axes differ in length.
Extraction extract_feature_vector(const Window& win);

struct BatchExtraction {
  std::vector<FeatureVector> vectors;
  std::size_t degenerate_windows = 0;
};

/// Featurizes windows in order, optionally across `threads` workers. The
/// output does not depend on the thread count.
BatchExtraction extract_all(std::span<const Window> windows, unsigned threads = 1);

}  // namespace gaitid::features
