#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gaitid {

/// Dense class label in [0, K).
using ClassLabel = std::uint32_t;

inline constexpr double kDefaultRateHz = 50.0;
inline constexpr std::size_t kDefaultWindowWidth = 100;
inline constexpr double kDefaultOverlap = 0.5;
inline constexpr std::size_t kFeatureCount = 30;

struct AxialSample {
  std::size_t t = 0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// A labeled tri-axial accelerometer stream, uniformly sampled at `rate_hz`.
/// Samples carry indices 0..n-1.
class Recording {
public:
  Recording(ClassLabel user_id, double rate_hz, std::vector<AxialSample> samples);

  ClassLabel user_id() const noexcept { return user_id_; }
  double rate_hz() const noexcept { return rate_hz_; }
  std::span<const AxialSample> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }

private:
  ClassLabel user_id_;
  double rate_hz_;
  std::vector<AxialSample> samples_;
};

/// Fixed-width slice of a recording, stored per axis.
struct Window {
  std::vector<double> series_x;
  std::vector<double> series_y;
  std::vector<double> series_z;
  double rate_hz = kDefaultRateHz;
  ClassLabel user_id = 0;

  std::size_t size() const noexcept { return series_x.size(); }
};

/// Two-sided DFT magnitude spectrum; bins.size() equals the source length.
struct Spectrum {
  std::vector<double> bins;
};

struct FeatureVector {
  std::array<double, kFeatureCount> values{};
  ClassLabel label = 0;
};

/// Labeled feature rows stored row-major. The feature count is fixed per
/// dataset (30 for pipeline data; arbitrary for tree unit tests).
class Dataset {
public:
  Dataset(std::size_t feature_count, std::size_t class_count);

  static Dataset from_feature_vectors(std::span<const FeatureVector> rows, std::size_t class_count);

  void add_row(std::span<const double> values, ClassLabel label);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t feature_count() const noexcept { return feature_count_; }
  std::size_t class_count() const noexcept { return class_count_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * feature_count_, feature_count_};
  }
  double value(std::size_t i, std::size_t feature) const { return values_[i * feature_count_ + feature]; }
  ClassLabel label(std::size_t i) const { return labels_[i]; }
  std::span<const ClassLabel> labels() const noexcept { return labels_; }

  Dataset subset(std::span<const std::size_t> indices) const;

  /// Rows per class, length class_count().
  std::vector<std::size_t> class_counts() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

private:
  std::size_t feature_count_;
  std::size_t class_count_;
  std::vector<double> values_;
  std::vector<ClassLabel> labels_;
};

/// Dense label <-> user name mapping written next to featurized data.
class LabelMap {
public:
  LabelMap() = default;
  explicit LabelMap(std::vector<std::string> names);

  /// Orders names numerically when both are all digits, lexicographically otherwise.
  static LabelMap from_unordered(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(ClassLabel label) const { return names_.at(label); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  /// Throws ValidationError when `name` is unknown.
  ClassLabel label_of(const std::string& name) const;

private:
  std::vector<std::string> names_;
};

}  // namespace gaitid
