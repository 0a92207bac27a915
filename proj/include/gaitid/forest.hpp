#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "gaitid/cart.hpp"
#include "gaitid/random.hpp"
#include "gaitid/signal_model.hpp"

namespace gaitid::forest {

inline constexpr std::size_t kDefaultTreeCount = 64;
inline constexpr std::size_t kDefaultFeatureSubset = 5;  // floor(sqrt(30))
inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kModelFormatTag = "gaitid-forest";

struct ForestParams {
  std::size_t tree_count = kDefaultTreeCount;
  /// Candidate features drawn per node; nullopt considers every feature.
  std::optional<std::size_t> feature_subset_size = kDefaultFeatureSubset;
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_split = 2;
  /// Each tree trains on an n-row bootstrap sample; false uses the full set.
  bool bootstrap = true;
  std::uint64_t master_seed = 0;

  /// Single unrestricted tree on the full training set.
  static ForestParams decision_tree(std::uint64_t seed);

  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

/// Tree `index` trains from Rng(tree_seed(master_seed, index)).
std::uint64_t tree_seed(std::uint64_t master_seed, std::size_t index);

/// n row indices drawn uniformly with replacement. Throws on n == 0.
std::vector<std::size_t> bootstrap_indices(std::size_t n, Rng& rng);

/// The rows selected by bootstrap_indices, as a dataset.
Dataset bootstrap_sample(const Dataset& data, Rng& rng);

class Forest {
public:
  Forest(ForestParams params, std::vector<cart::DecisionTree> trees, std::vector<std::uint64_t> seeds);

  const ForestParams& params() const noexcept { return params_; }
  const std::vector<cart::DecisionTree>& trees() const noexcept { return trees_; }
  const std::vector<std::uint64_t>& seeds() const noexcept { return seeds_; }

  /// Plurality vote; ties go to the lowest label.
  ClassLabel predict(std::span<const double> features) const;
  /// Votes per class for one row.
  std::vector<std::size_t> votes(std::span<const double> features) const;

  /// Model document: format tag and version, params, label names and trees.
  nlohmann::json to_json(const LabelMap& labels) const;
  static Forest from_json(const nlohmann::json& doc, LabelMap* labels_out = nullptr);

  friend bool operator==(const Forest&, const Forest&) = default;

private:
  ForestParams params_;
  std::vector<cart::DecisionTree> trees_;
  std::vector<std::uint64_t> seeds_;
};

/// Trains tree_count trees, optionally on `threads` workers. Each tree draws
/// its bootstrap and its per-node feature subsets from its own seeded stream,
/// so the model is identical for any thread count. Throws ValidationError on
/// fewer than two classes present or invalid params.
Forest train_forest(const Dataset& data, const ForestParams& params, unsigned threads = 1);

inline ClassLabel predict_forest(const Forest& forest, std::span<const double> features) {
  return forest.predict(features);
}

}  // namespace gaitid::forest
