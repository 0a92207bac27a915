#include "gaitid/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaitid/dsp.hpp"
#include "gaitid/error.hpp"
#include "gaitid/parallel.hpp"

namespace gaitid::features {

namespace {

constexpr std::array<FeatureDescriptor, kFeatureCount> kLayout{{
    {"time_mean_x", Domain::time, Axis::x},
    {"time_mean_y", Domain::time, Axis::y},
    {"time_mean_z", Domain::time, Axis::z},
    {"freq_mean_x", Domain::frequency, Axis::x},
    {"freq_mean_y", Domain::frequency, Axis::y},
    {"freq_mean_z", Domain::frequency, Axis::z},
    {"time_median_x", Domain::time, Axis::x},
    {"time_median_y", Domain::time, Axis::y},
    {"time_median_z", Domain::time, Axis::z},
    {"freq_median_x", Domain::frequency, Axis::x},
    {"freq_median_y", Domain::frequency, Axis::y},
    {"freq_median_z", Domain::frequency, Axis::z},
    {"time_magnitude", Domain::time, Axis::none},
    {"freq_magnitude", Domain::frequency, Axis::none},
    {"time_corr_xz", Domain::time, Axis::none},
    {"time_corr_yz", Domain::time, Axis::none},
    {"freq_corr_xz", Domain::frequency, Axis::none},
    {"freq_corr_yz", Domain::frequency, Axis::none},
    {"peak_count_x", Domain::time, Axis::x},
    {"peak_count_y", Domain::time, Axis::y},
    {"peak_count_z", Domain::time, Axis::z},
    {"peak_spacing_x", Domain::time, Axis::x},
    {"peak_spacing_y", Domain::time, Axis::y},
    {"peak_spacing_z", Domain::time, Axis::z},
    {"spectral_centroid_x", Domain::frequency, Axis::x},
    {"spectral_centroid_y", Domain::frequency, Axis::y},
    {"spectral_centroid_z", Domain::frequency, Axis::z},
    {"mad_x", Domain::time, Axis::x},
    {"mad_y", Domain::time, Axis::y},
    {"mad_z", Domain::time, Axis::z},
}};

void require_non_empty(std::span<const double> series, const char* what) {
  if (series.empty()) throw ValidationError(std::string(what) + " of an empty series");
}

}  // namespace

const std::array<FeatureDescriptor, kFeatureCount>& layout() { return kLayout; }

std::size_t index_of(std::string_view name) {
  for (std::size_t i = 0; i < kLayout.size(); ++i) {
    if (kLayout[i].name == name) return i;
  }
  throw ValidationError("unknown feature '" + std::string(name) + "'");
}

double mean(std::span<const double> series) {
  require_non_empty(series, "mean");
  // Running form stays exact on constant input.
  double m = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) m += (series[i] - m) / static_cast<double>(i + 1);
  return m;
}

double median(std::span<const double> series) {
  require_non_empty(series, "median");
  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

double mean_abs_deviation(std::span<const double> series) {
  const double mu = mean(series);
  double acc = 0.0;
  for (double v : series) acc += std::abs(v - mu);
  return acc / static_cast<double>(series.size());
}

double magnitude(std::span<const double> x, std::span<const double> y, std::span<const double> z) {
  if (x.size() != y.size() || x.size() != z.size()) {
    throw ValidationError("magnitude: axis lengths differ");
  }
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += std::sqrt(x[k] * x[k] + y[k] * y[k] + z[k] * z[k]);
  return acc / static_cast<double>(x.size());
}

Ratio cross_correlation(double numerator_mean, double z_mean) {
  if (std::abs(z_mean) <= kCorrEpsilon) return {0.0, true};
  return {numerator_mean / z_mean, false};
}

std::size_t peak_count(std::span<const double> series) { return dsp::find_peaks(series).size(); }

double mean_peak_spacing(std::span<const double> series, double rate_hz) {
  const auto peaks = dsp::find_peaks(series);
  if (peaks.size() < 2) return 0.0;
  // Successive differences telescope to last - first.
  const double mean_gap = static_cast<double>(peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
  return mean_gap / rate_hz;
}

Extraction extract_feature_vector(const Window& win) {
  const std::size_t l = win.size();
  if (win.series_y.size() != l || win.series_z.size() != l) {
    throw ValidationError("window axes have different lengths");
  }
  if (l < 2) throw ValidationError("window must contain at least 2 samples");

  const std::array<std::span<const double>, 3> axes{win.series_x, win.series_y, win.series_z};
  const std::array<Spectrum, 3> spectra{dsp::dft_magnitude(axes[0]), dsp::dft_magnitude(axes[1]),
                                        dsp::dft_magnitude(axes[2])};

  Extraction out;
  auto& v = out.vector.values;
  out.vector.label = win.user_id;

  std::array<double, 3> time_means{}, freq_means{};
  for (std::size_t a = 0; a < 3; ++a) {
    time_means[a] = mean(axes[a]);
    freq_means[a] = mean(spectra[a].bins);
    v[slot::time_mean + a] = time_means[a];
    v[slot::freq_mean + a] = freq_means[a];
    v[slot::time_median + a] = median(axes[a]);
    v[slot::freq_median + a] = median(spectra[a].bins);
    v[slot::peak_count + a] = static_cast<double>(peak_count(axes[a]));
    v[slot::peak_spacing + a] = mean_peak_spacing(axes[a], win.rate_hz);
    v[slot::spectral_centroid + a] = dsp::spectral_centroid(axes[a], spectra[a]);
    v[slot::mean_abs_deviation + a] = mean_abs_deviation(axes[a]);
  }

  v[slot::time_magnitude] = magnitude(axes[0], axes[1], axes[2]);
  v[slot::freq_magnitude] = magnitude(spectra[0].bins, spectra[1].bins, spectra[2].bins);

  const auto fill_corr = [&](std::size_t dst, double numerator, double z_mean, std::size_t& flags) {
    const auto r = cross_correlation(numerator, z_mean);
    v[dst] = r.value;
    if (r.degenerate) ++flags;
  };
  fill_corr(slot::time_corr_xz, time_means[0], time_means[2], out.degenerate_time);
  fill_corr(slot::time_corr_yz, time_means[1], time_means[2], out.degenerate_time);
  fill_corr(slot::freq_corr_xz, freq_means[0], freq_means[2], out.degenerate_freq);
  fill_corr(slot::freq_corr_yz, freq_means[1], freq_means[2], out.degenerate_freq);
  return out;
}

BatchExtraction extract_all(std::span<const Window> windows, unsigned threads) {
  std::vector<Extraction> results(windows.size());
  parallel_for(windows.size(), threads, [&](std::size_t i) { results[i] = extract_feature_vector(windows[i]); });
  BatchExtraction batch;
  batch.vectors.reserve(results.size());
  for (auto& r : results) {
    if (r.degenerate_total() > 0) ++batch.degenerate_windows;
    batch.vectors.push_back(r.vector);
  }
  return batch;
}

}  // namespace gaitid::features
