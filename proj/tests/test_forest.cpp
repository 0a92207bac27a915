#include <doctest.h>

#include <cmath>
#include <set>

#include "gaitid/error.hpp"
#include "gaitid/forest.hpp"
#include "gaitid/random.hpp"

using namespace gaitid;

namespace {

Dataset blobs(Rng& rng, std::size_t per_class, std::size_t classes, std::size_t features, double spread) {
  Dataset ds(features, classes);
  std::vector<double> v(features);
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      for (std::size_t f = 0; f < features; ++f) v[f] = double(c) * ((f % 3) + 1) + rng.normal(0, spread);
      ds.add_row(v, static_cast<ClassLabel>(c));
    }
  }
  return ds;
}

}  // namespace

TEST_CASE("bootstrap_sample") {
  Rng rng(1);
  Dataset one(2, 2);
  one.add_row(std::vector<double>{1, 2}, 1);
  const auto s = forest::bootstrap_sample(one, rng);
  CHECK(s == one);

  Rng a(42), b(42);
  CHECK(forest::bootstrap_indices(1000, a) == forest::bootstrap_indices(1000, b));

  Rng c(7);
  const auto idx = forest::bootstrap_indices(1000, c);
  CHECK(idx.size() == 1000);
  const std::set<std::size_t> distinct(idx.begin(), idx.end());
  const double frac = double(distinct.size()) / 1000.0;
  CHECK(std::abs(frac - (1.0 - std::exp(-1.0))) <= 0.05);

  CHECK_THROWS_AS(forest::bootstrap_indices(0, c), ValidationError);
  CHECK_THROWS_AS(forest::bootstrap_sample(Dataset(2, 2), c), ValidationError);
}

TEST_CASE("tree seeds are distinct and depend only on (master, index)") {
  std::set<std::uint64_t> seeds;
  for (std::size_t i = 0; i < 256; ++i) seeds.insert(forest::tree_seed(12, i));
  CHECK(seeds.size() == 256);
  CHECK(forest::tree_seed(12, 3) == forest::tree_seed(12, 3));
  CHECK(forest::tree_seed(12, 3) != forest::tree_seed(13, 3));
}

TEST_CASE("single unrestricted tree without bootstrap fits training data") {
  Rng rng(3);
  const auto ds = blobs(rng, 40, 4, 30, 2.0);
  auto p = forest::ForestParams::decision_tree(5);
  p.feature_subset_size = 30;
  const auto f = forest::train_forest(ds, p);
  REQUIRE(f.trees().size() == 1);
  for (std::size_t i = 0; i < ds.size(); ++i) CHECK(f.predict(ds.row(i)) == ds.label(i));
}

TEST_CASE("training is deterministic and thread-count independent") {
  Rng rng(4);
  const auto ds = blobs(rng, 30, 3, 10, 1.5);
  forest::ForestParams p;
  p.tree_count = 16;
  p.feature_subset_size = 3;
  p.master_seed = 99;
  const auto serial = forest::train_forest(ds, p, 1);
  const auto parallel = forest::train_forest(ds, p, 4);
  const auto again = forest::train_forest(ds, p, 1);
  CHECK(serial == parallel);
  CHECK(serial == again);

  Rng probe_rng(8);
  const auto probes = blobs(probe_rng, 20, 3, 10, 3.0);
  for (std::size_t i = 0; i < probes.size(); ++i) CHECK(serial.predict(probes.row(i)) == parallel.predict(probes.row(i)));

  p.master_seed = 100;
  CHECK_FALSE(forest::train_forest(ds, p) == serial);
}

TEST_CASE("plurality vote with ties to the lowest label") {
  using Node = cart::DecisionTree::Node;
  const auto leaf = [](ClassLabel l) {
    return cart::DecisionTree(std::vector<Node>{cart::DecisionTree::Leaf{l, {1, 1, 1}}}, 1, 3);
  };
  forest::ForestParams p;
  const std::vector<double> x{0.0};

  p.tree_count = 3;
  forest::Forest agree(p, {leaf(2), leaf(2), leaf(2)}, {0, 1, 2});
  CHECK(agree.predict(x) == 2);

  forest::Forest plurality(p, {leaf(0), leaf(0), leaf(1)}, {0, 1, 2});
  CHECK(plurality.predict(x) == 0);

  p.tree_count = 64;
  std::vector<cart::DecisionTree> split;
  for (int i = 0; i < 32; ++i) split.push_back(leaf(2));
  for (int i = 0; i < 32; ++i) split.push_back(leaf(1));
  forest::Forest tie(p, split, std::vector<std::uint64_t>(64, 0));
  CHECK(tie.predict(x) == 1);
  CHECK(tie.votes(x) == std::vector<std::size_t>{0, 32, 32});
}

TEST_CASE("train_forest validation") {
  Dataset one_class(2, 2);
  one_class.add_row(std::vector<double>{1, 2}, 0);
  one_class.add_row(std::vector<double>{2, 3}, 0);
  CHECK_THROWS_AS(forest::train_forest(one_class, forest::ForestParams{}), ValidationError);

  Rng rng(5);
  const auto ds = blobs(rng, 10, 2, 4, 1.0);
  forest::ForestParams p;
  p.tree_count = 0;
  CHECK_THROWS_AS(forest::train_forest(ds, p), ValidationError);
  p = {};
  p.feature_subset_size = 5;  // more than the 4 features
  CHECK_THROWS_AS(forest::train_forest(ds, p), ValidationError);
  p.feature_subset_size = 0;
  CHECK_THROWS_AS(forest::train_forest(ds, p), ValidationError);
}

TEST_CASE("model document round-trip") {
  Rng rng(6);
  const auto ds = blobs(rng, 20, 3, 30, 2.0);
  forest::ForestParams p;
  p.tree_count = 5;
  p.max_depth = 6;
  p.master_seed = 1234567890123ULL;
  const auto f = forest::train_forest(ds, p);
  const LabelMap labels({"ann", "bo", "cy"});
  const auto doc = f.to_json(labels);
  CHECK(doc["format"] == forest::kModelFormatTag);
  CHECK(doc["version"] == forest::kModelFormatVersion);

  LabelMap back_labels;
  const auto back = forest::Forest::from_json(nlohmann::json::parse(doc.dump()), &back_labels);
  CHECK(back == f);
  CHECK(back_labels.names() == labels.names());

  auto wrong = doc;
  wrong["version"] = 99;
  CHECK_THROWS_AS(forest::Forest::from_json(wrong), SchemaError);
  wrong = doc;
  wrong.erase("trees");
  CHECK_THROWS_AS(forest::Forest::from_json(wrong), SchemaError);
}
