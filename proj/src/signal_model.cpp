#include "gaitid/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gaitid/error.hpp"

namespace gaitid {

Recording::Recording(ClassLabel user_id, double rate_hz, std::vector<AxialSample> samples)
    : user_id_(user_id), rate_hz_(rate_hz), samples_(std::move(samples)) {
  if (!(rate_hz_ > 0.0) || !std::isfinite(rate_hz_)) {
    throw ValidationError("sample rate must be positive, got " + std::to_string(rate_hz_));
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (s.t != i) throw ValidationError("sample indices must be 0..n-1 in order");
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.z)) {
      throw ValidationError("non-finite acceleration at sample " + std::to_string(i));
    }
  }
}

Dataset::Dataset(std::size_t feature_count, std::size_t class_count)
    : feature_count_(feature_count), class_count_(class_count) {
  if (feature_count_ == 0) throw ValidationError("dataset needs at least one feature");
}

Dataset Dataset::from_feature_vectors(std::span<const FeatureVector> rows, std::size_t class_count) {
  Dataset ds(kFeatureCount, class_count);
  for (const auto& fv : rows) ds.add_row(fv.values, fv.label);
  return ds;
}

void Dataset::add_row(std::span<const double> values, ClassLabel label) {
  if (values.size() != feature_count_) {
    throw ValidationError("row has " + std::to_string(values.size()) + " features, expected " +
                          std::to_string(feature_count_));
  }
  if (label >= class_count_) {
    throw ValidationError("label " + std::to_string(label) + " outside [0, " +
                          std::to_string(class_count_) + ")");
  }
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
    throw ValidationError("non-finite feature value");
  }
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label);
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out(feature_count_, class_count_);
  out.values_.reserve(indices.size() * feature_count_);
  out.labels_.reserve(indices.size());
  for (auto i : indices) {
    auto r = row(i);
    out.values_.insert(out.values_.end(), r.begin(), r.end());
    out.labels_.push_back(labels_[i]);
  }
  return out;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(class_count_, 0);
  for (auto l : labels_) ++counts[l];
  return counts;
}

LabelMap::LabelMap(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> unique(names_.begin(), names_.end());
  if (unique.size() != names_.size()) throw ValidationError("duplicate user names in label map");
}

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return c >= '0' && c <= '9'; });
}

bool natural_less(const std::string& a, const std::string& b) {
  if (all_digits(a) && all_digits(b)) {
    const auto strip = [](const std::string& s) {
      auto p = s.find_first_not_of('0');
      return p == std::string::npos ? std::string("0") : s.substr(p);
    };
    const auto sa = strip(a), sb = strip(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

}  // namespace

LabelMap LabelMap::from_unordered(std::vector<std::string> names) {
  std::sort(names.begin(), names.end(), natural_less);
  return LabelMap(std::move(names));
}

ClassLabel LabelMap::label_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ValidationError("unknown user '" + name + "'");
  return static_cast<ClassLabel>(it - names_.begin());
}

}  // namespace gaitid
