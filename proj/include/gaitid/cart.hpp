#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gaitid/random.hpp"
#include "gaitid/signal_model.hpp"

namespace gaitid::cart {

/// Per-class row counts at a node.
using Histogram = std::vector<std::size_t>;

/// p (1 - p). Throws ValidationError unless 0 <= p <= 1.
double gini(double p);

/// Sum of gini(count_k / total) over classes. Throws on an empty histogram.
double node_impurity(std::span<const std::size_t> histogram);

/// p(parent) I(parent) - (p(left) I(left) + p(right) I(right)), with
/// p(n) = total(n) / root_total. Throws when a child is empty or the
/// children do not add up to the parent.
double impurity_drop(std::span<const std::size_t> parent, std::span<const std::size_t> left,
                     std::span<const std::size_t> right, std::size_t root_total);

/// Drops within this of the current best are ties.
inline constexpr double kTieTolerance = 1e-12;

/// Threshold placed between consecutive distinct sorted values a < b;
/// guaranteed a <= threshold < b.
double split_midpoint(double a, double b);

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double drop = 0.0;
};

/// Exhaustive search over candidate features and all midpoints between
/// consecutive distinct values of `rows`. Returns the split with the largest
/// impurity drop; ties go to the lower feature index, then lower threshold.
/// Returns nullopt when no split has a strictly positive drop.
std::optional<Split> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                std::span<const std::size_t> candidate_features, std::size_t root_total);

struct TreeParams {
  std::optional<std::size_t> max_depth;            // nullopt: unlimited
  std::size_t min_samples_split = 2;
  std::optional<std::size_t> feature_subset_size;  // nullopt: all features at every node
};

class DecisionTree {
public:
  struct Internal {
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;

    friend bool operator==(const Internal&, const Internal&) = default;
  };
  struct Leaf {
    ClassLabel label = 0;
    Histogram histogram;

    friend bool operator==(const Leaf&, const Leaf&) = default;
  };
  using Node = std::variant<Internal, Leaf>;

  DecisionTree() = default;
  DecisionTree(std::vector<Node> nodes, std::size_t feature_count, std::size_t class_count);

  /// Follows value <= threshold to the left child until a leaf.
  ClassLabel predict(std::span<const double> features) const;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t feature_count() const noexcept { return feature_count_; }
  std::size_t class_count() const noexcept { return class_count_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  /// Nested document: internal nodes {feature, threshold, left, right},
  /// leaves {label, histogram}.
  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& doc, std::size_t feature_count, std::size_t class_count);

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

private:
  std::vector<Node> nodes_;  // root at index 0
  std::size_t feature_count_ = 0;
  std::size_t class_count_ = 0;
};

/// Grows a tree on `rows` of `data` until nodes are pure, smaller than
/// min_samples_split, at max_depth, or unsplittable (all candidate features
/// constant). An impure node with no positive-drop split still splits at its
/// first partition in tie order, so unrestricted trees fit any
/// contradiction-free training set. When
/// feature_subset_size is set, `rng` draws that many distinct candidate
/// features at each node; otherwise `rng` is untouched.
DecisionTree build_tree(const Dataset& data, std::span<const std::size_t> rows, const TreeParams& params, Rng& rng);
DecisionTree build_tree(const Dataset& data, const TreeParams& params, Rng& rng);

inline ClassLabel predict(const DecisionTree& tree, std::span<const double> features) {
  return tree.predict(features);
}

}  // namespace gaitid::cart
