#include "gaitid/forest.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gaitid/error.hpp"
#include "gaitid/parallel.hpp"

namespace gaitid::forest {

ForestParams ForestParams::decision_tree(std::uint64_t seed) {
  ForestParams p;
  p.tree_count = 1;
  p.feature_subset_size = std::nullopt;
  p.bootstrap = false;
  p.master_seed = seed;
  return p;
}

std::uint64_t tree_seed(std::uint64_t master_seed, std::size_t index) { return derive_seed(master_seed, index); }

std::vector<std::size_t> bootstrap_indices(std::size_t n, Rng& rng) {
  if (n == 0) throw ValidationError("bootstrap of an empty dataset");
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = static_cast<std::size_t>(rng.uniform_below(n));
  return idx;
}

Dataset bootstrap_sample(const Dataset& data, Rng& rng) {
  const auto idx = bootstrap_indices(data.size(), rng);
  return data.subset(idx);
}

Forest::Forest(ForestParams params, std::vector<cart::DecisionTree> trees, std::vector<std::uint64_t> seeds)
    : params_(std::move(params)), trees_(std::move(trees)), seeds_(std::move(seeds)) {
  if (trees_.empty()) throw ValidationError("forest has no trees");
  if (trees_.size() != params_.tree_count || seeds_.size() != trees_.size()) {
    throw ValidationError("forest tree count does not match its params");
  }
}

std::vector<std::size_t> Forest::votes(std::span<const double> features) const {
  std::vector<std::size_t> counts(trees_.front().class_count(), 0);
  for (const auto& tree : trees_) ++counts[tree.predict(features)];
  return counts;
}

ClassLabel Forest::predict(std::span<const double> features) const {
  const auto counts = votes(features);
  return static_cast<ClassLabel>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

namespace {

nlohmann::json params_to_json(const ForestParams& p) {
  nlohmann::json j;
  j["tree_count"] = p.tree_count;
  j["feature_subset_size"] = p.feature_subset_size ? nlohmann::json(*p.feature_subset_size) : nlohmann::json("all");
  j["max_depth"] = p.max_depth ? nlohmann::json(*p.max_depth) : nlohmann::json(nullptr);
  j["min_samples_split"] = p.min_samples_split;
  j["bootstrap"] = p.bootstrap;
  j["master_seed"] = p.master_seed;
  return j;
}

ForestParams params_from_json(const nlohmann::json& j) {
  ForestParams p;
  p.tree_count = j.at("tree_count").get<std::size_t>();
  const auto& k = j.at("feature_subset_size");
  p.feature_subset_size = k.is_string() ? std::nullopt : std::optional<std::size_t>(k.get<std::size_t>());
  const auto& d = j.at("max_depth");
  p.max_depth = d.is_null() ? std::nullopt : std::optional<std::size_t>(d.get<std::size_t>());
  p.min_samples_split = j.at("min_samples_split").get<std::size_t>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  p.master_seed = j.at("master_seed").get<std::uint64_t>();
  return p;
}

void validate(const ForestParams& p, std::size_t feature_count) {
  if (p.tree_count < 1) throw ValidationError("tree count must be >= 1");
  if (p.feature_subset_size && (*p.feature_subset_size < 1 || *p.feature_subset_size > feature_count)) {
    throw ValidationError("feature subset size must be in [1, " + std::to_string(feature_count) + "]");
  }
  if (p.min_samples_split < 2) throw ValidationError("min_samples_split must be >= 2");
}

}  // namespace

nlohmann::json Forest::to_json(const LabelMap& labels) const {
  nlohmann::json doc;
  doc["format"] = kModelFormatTag;
  doc["version"] = kModelFormatVersion;
  doc["params"] = params_to_json(params_);
  doc["feature_count"] = trees_.front().feature_count();
  doc["class_count"] = trees_.front().class_count();
  doc["labels"] = labels.names();
  doc["tree_seeds"] = seeds_;
  auto& trees = doc["trees"] = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return doc;
}

Forest Forest::from_json(const nlohmann::json& doc, LabelMap* labels_out) {
  try {
    if (doc.at("format") != kModelFormatTag) throw SchemaError("not a forest model document");
    if (doc.at("version") != kModelFormatVersion) {
      throw SchemaError("unsupported model version " + doc.at("version").dump());
    }
    auto params = params_from_json(doc.at("params"));
    const auto feature_count = doc.at("feature_count").get<std::size_t>();
    const auto class_count = doc.at("class_count").get<std::size_t>();
    std::vector<cart::DecisionTree> trees;
    for (const auto& t : doc.at("trees")) trees.push_back(cart::DecisionTree::from_json(t, feature_count, class_count));
    if (labels_out) *labels_out = LabelMap(doc.at("labels").get<std::vector<std::string>>());
    return Forest(std::move(params), std::move(trees), doc.at("tree_seeds").get<std::vector<std::uint64_t>>());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed model document: ") + e.what());
  }
}

Forest train_forest(const Dataset& data, const ForestParams& params, unsigned threads) {
  validate(params, data.feature_count());
  const auto counts = data.class_counts();
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2) {
    throw ValidationError("training data must contain at least two classes");
  }

  const cart::TreeParams tree_params{params.max_depth, params.min_samples_split, params.feature_subset_size};
  std::vector<std::size_t> all_rows(data.size());
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});

  std::vector<std::uint64_t> seeds(params.tree_count);
  std::vector<cart::DecisionTree> trees(params.tree_count);
  parallel_for(params.tree_count, threads, [&](std::size_t i) {
    seeds[i] = tree_seed(params.master_seed, i);
    Rng rng(seeds[i]);
    if (params.bootstrap) {
      const auto rows = bootstrap_indices(data.size(), rng);
      trees[i] = cart::build_tree(data, rows, tree_params, rng);
    } else {
      trees[i] = cart::build_tree(data, all_rows, tree_params, rng);
    }
  });
  return Forest(params, std::move(trees), std::move(seeds));
}

}  // namespace gaitid::forest
