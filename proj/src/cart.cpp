#include "gaitid/cart.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gaitid/error.hpp"

namespace gaitid::cart {

namespace {

std::size_t total_of(std::span<const std::size_t> h) { return std::accumulate(h.begin(), h.end(), std::size_t{0}); }

std::size_t sum_of_squares(std::span<const std::size_t> h) {
  std::size_t q = 0;
  for (auto c : h) q += c * c;
  return q;
}

// Sign of the impurity drop in exact integer arithmetic. With Q = sum c_k^2,
// drop * root_total = Q1/N1 + Q2/N2 - Q0/N0, so the drop is positive iff
// (Q1 N2 + Q2 N1) N0 > Q0 N1 N2.
bool strictly_positive_drop(std::size_t q0, std::size_t n0, std::size_t q1, std::size_t n1, std::size_t q2,
                            std::size_t n2) {
  __extension__ using u128 = unsigned __int128;
  const u128 lhs = (u128(q1) * n2 + u128(q2) * n1) * n0;
  const u128 rhs = u128(q0) * n1 * n2;
  return lhs > rhs;
}

ClassLabel majority(std::span<const std::size_t> histogram) {
  return static_cast<ClassLabel>(std::max_element(histogram.begin(), histogram.end()) - histogram.begin());
}

// With allow_zero_drop, a node whose every partition has zero drop (XOR-like
// layouts) still splits at its first partition in tie order.
std::optional<Split> search_split(const Dataset& data, std::span<const std::size_t> rows,
                                  std::span<const std::size_t> candidate_features, std::size_t root_total,
                                  bool allow_zero_drop) {
  if (rows.size() < 2 || candidate_features.empty()) return std::nullopt;

  std::vector<std::size_t> features(candidate_features.begin(), candidate_features.end());
  std::sort(features.begin(), features.end());

  const std::size_t k = data.class_count();
  Histogram parent(k, 0);
  for (auto r : rows) ++parent[data.label(r)];
  const std::size_t n0 = rows.size();
  const std::size_t q0 = sum_of_squares(parent);

  std::optional<Split> best;
  std::optional<Split> first_partition;
  std::vector<std::pair<double, ClassLabel>> column(n0);
  Histogram left(k), right(k);

  for (auto f : features) {
    for (std::size_t i = 0; i < n0; ++i) column[i] = {data.value(rows[i], f), data.label(rows[i])};
    std::sort(column.begin(), column.end());
    std::fill(left.begin(), left.end(), 0);
    right = parent;
    std::size_t q_left = 0, q_right = q0;

    for (std::size_t i = 0; i + 1 < n0; ++i) {
      const auto c = column[i].second;
      // Maintain sums of squares incrementally: (c+1)^2 - c^2 = 2c + 1.
      q_left += 2 * left[c] + 1;
      q_right -= 2 * right[c] - 1;
      ++left[c];
      --right[c];
      if (!(column[i].first < column[i + 1].first)) continue;

      const std::size_t n1 = i + 1, n2 = n0 - n1;
      if (!strictly_positive_drop(q0, n0, q_left, n1, q_right, n2)) {
        if (allow_zero_drop && !first_partition) {
          first_partition = Split{f, split_midpoint(column[i].first, column[i + 1].first), 0.0};
        }
        continue;
      }
      const double drop = impurity_drop(parent, left, right, root_total);
      if (!best || drop > best->drop + kTieTolerance) {
        best = Split{f, split_midpoint(column[i].first, column[i + 1].first), drop};
      }
    }
  }
  return best ? best : first_partition;
}

class TreeBuilder {
public:
  TreeBuilder(const Dataset& data, const TreeParams& params, Rng& rng, std::size_t root_total)
      : data_(data), params_(params), rng_(rng), root_total_(root_total) {
    all_features_.resize(data.feature_count());
    std::iota(all_features_.begin(), all_features_.end(), std::size_t{0});
  }

  std::size_t grow(std::vector<std::size_t> rows, std::size_t depth) {
    Histogram hist(data_.class_count(), 0);
    for (auto r : rows) ++hist[data_.label(r)];

    const bool pure = std::count_if(hist.begin(), hist.end(), [](std::size_t c) { return c > 0; }) <= 1;
    const bool too_small = rows.size() < params_.min_samples_split;
    const bool too_deep = params_.max_depth && depth >= *params_.max_depth;
    if (pure || too_small || too_deep) return add_leaf(std::move(hist));

    const auto candidates = draw_candidates();
    const auto split = search_split(data_, rows, candidates, root_total_, true);
    if (!split) return add_leaf(std::move(hist));

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows) {
      (data_.value(r, split->feature) <= split->threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    const std::size_t self = nodes_.size();
    nodes_.emplace_back(DecisionTree::Internal{split->feature, split->threshold, 0, 0});
    const std::size_t left = grow(std::move(left_rows), depth + 1);
    const std::size_t right = grow(std::move(right_rows), depth + 1);
    auto& node = std::get<DecisionTree::Internal>(nodes_[self]);
    node.left = left;
    node.right = right;
    return self;
  }

  std::vector<DecisionTree::Node> take_nodes() { return std::move(nodes_); }

private:
  std::size_t add_leaf(Histogram hist) {
    const auto label = majority(hist);
    nodes_.emplace_back(DecisionTree::Leaf{label, std::move(hist)});
    return nodes_.size() - 1;
  }

  std::vector<std::size_t> draw_candidates() {
    const std::size_t f = all_features_.size();
    if (!params_.feature_subset_size || *params_.feature_subset_size >= f) return all_features_;
    const std::size_t k = *params_.feature_subset_size;
    std::vector<std::size_t> pool = all_features_;
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(rng_.uniform_below(f - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  const Dataset& data_;
  const TreeParams& params_;
  Rng& rng_;
  std::size_t root_total_;
  std::vector<std::size_t> all_features_;
  std::vector<DecisionTree::Node> nodes_;
};

}  // namespace

double gini(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("gini: proportion outside [0, 1]");
  return p * (1.0 - p);
}

double node_impurity(std::span<const std::size_t> histogram) {
  const auto total = total_of(histogram);
  if (total == 0) throw ValidationError("node impurity of an empty node");
  double acc = 0.0;
  for (auto c : histogram) acc += gini(static_cast<double>(c) / static_cast<double>(total));
  return acc;
}

double impurity_drop(std::span<const std::size_t> parent, std::span<const std::size_t> left,
                     std::span<const std::size_t> right, std::size_t root_total) {
  const auto n0 = total_of(parent), n1 = total_of(left), n2 = total_of(right);
  if (n1 == 0 || n2 == 0) throw ValidationError("impurity drop: empty child");
  if (n1 + n2 != n0) throw ValidationError("impurity drop: children do not partition the parent");
  if (root_total < n0) throw ValidationError("impurity drop: root total smaller than parent");
  const double root = static_cast<double>(root_total);
  const auto weight = [root](std::size_t n) { return static_cast<double>(n) / root; };
  return weight(n0) * node_impurity(parent) -
         (weight(n1) * node_impurity(left) + weight(n2) * node_impurity(right));
}

double split_midpoint(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return mid < b ? mid : a;
}

std::optional<Split> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                std::span<const std::size_t> candidate_features, std::size_t root_total) {
  return search_split(data, rows, candidate_features, root_total, false);
}

DecisionTree::DecisionTree(std::vector<Node> nodes, std::size_t feature_count, std::size_t class_count)
    : nodes_(std::move(nodes)), feature_count_(feature_count), class_count_(class_count) {
  if (nodes_.empty()) throw ValidationError("tree has no nodes");
  for (const auto& node : nodes_) {
    if (const auto* in = std::get_if<Internal>(&node)) {
      if (in->feature >= feature_count_ || in->left >= nodes_.size() || in->right >= nodes_.size()) {
        throw ValidationError("tree node references out of range");
      }
    } else if (std::get<Leaf>(node).label >= class_count_) {
      throw ValidationError("tree leaf label out of range");
    }
  }
}

ClassLabel DecisionTree::predict(std::span<const double> features) const {
  if (features.size() != feature_count_) {
    throw ValidationError("predict: expected " + std::to_string(feature_count_) + " features, got " +
                          std::to_string(features.size()));
  }
  std::size_t at = 0;
  while (const auto* in = std::get_if<Internal>(&nodes_[at])) {
    at = features[in->feature] <= in->threshold ? in->left : in->right;
  }
  return std::get<Leaf>(nodes_[at]).label;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t deepest = 0;
  while (!stack.empty()) {
    const auto [at, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (const auto* in = std::get_if<Internal>(&nodes_[at])) {
      stack.emplace_back(in->left, d + 1);
      stack.emplace_back(in->right, d + 1);
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return std::holds_alternative<Leaf>(n); }));
}

nlohmann::json DecisionTree::to_json() const {
  const auto emit = [this](const auto& self, std::size_t at) -> nlohmann::json {
    if (const auto* in = std::get_if<Internal>(&nodes_[at])) {
      return {{"feature", in->feature},
              {"threshold", in->threshold},
              {"left", self(self, in->left)},
              {"right", self(self, in->right)}};
    }
    const auto& leaf = std::get<Leaf>(nodes_[at]);
    return {{"label", leaf.label}, {"histogram", leaf.histogram}};
  };
  return emit(emit, 0);
}

DecisionTree DecisionTree::from_json(const nlohmann::json& doc, std::size_t feature_count, std::size_t class_count) {
  std::vector<Node> nodes;
  const auto parse = [&](const auto& self, const nlohmann::json& j) -> std::size_t {
    const std::size_t at = nodes.size();
    if (j.contains("feature")) {
      nodes.emplace_back(Internal{j.at("feature").get<std::size_t>(), j.at("threshold").get<double>(), 0, 0});
      const auto left = self(self, j.at("left"));
      const auto right = self(self, j.at("right"));
      auto& in = std::get<Internal>(nodes[at]);
      in.left = left;
      in.right = right;
    } else {
      nodes.emplace_back(Leaf{j.at("label").get<ClassLabel>(), j.at("histogram").get<Histogram>()});
    }
    return at;
  };
  try {
    parse(parse, doc);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed tree document: ") + e.what());
  }
  return DecisionTree(std::move(nodes), feature_count, class_count);
}

DecisionTree build_tree(const Dataset& data, std::span<const std::size_t> rows, const TreeParams& params, Rng& rng) {
  if (rows.empty()) throw ValidationError("cannot build a tree from zero rows");
  if (params.min_samples_split < 2) throw ValidationError("min_samples_split must be >= 2");
  if (params.feature_subset_size && *params.feature_subset_size == 0) {
    throw ValidationError("feature_subset_size must be >= 1");
  }
  TreeBuilder builder(data, params, rng, rows.size());
  builder.grow(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
  return DecisionTree(builder.take_nodes(), data.feature_count(), data.class_count());
}

DecisionTree build_tree(const Dataset& data, const TreeParams& params, Rng& rng) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return build_tree(data, rows, params, rng);
}

}  // namespace gaitid::cart
