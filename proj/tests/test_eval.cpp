#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "gaitid/error.hpp"
#include "gaitid/eval.hpp"
#include "gaitid/random.hpp"
#include "oracles/oracles.hpp"

using namespace gaitid;
using doctest::Approx;

namespace {

constexpr ClassLabel A = 0, B = 1;

std::vector<ClassLabel> balanced_labels(std::size_t per_class, std::size_t classes) {
  std::vector<ClassLabel> l;
  for (std::size_t c = 0; c < classes; ++c) l.insert(l.end(), per_class, static_cast<ClassLabel>(c));
  return l;
}

}  // namespace

TEST_CASE("stratified_kfold hand examples") {
  const auto labels = balanced_labels(10, 2);
  const auto folds = eval::stratified_kfold(labels, 2, 10, 3);
  REQUIRE(folds.size() == 10);
  for (const auto& f : folds) {
    REQUIRE(f.size() == 2);
    CHECK(labels[f[0]] != labels[f[1]]);
  }
  CHECK(eval::stratified_kfold(labels, 2, 10, 3) == folds);
  CHECK_FALSE(eval::stratified_kfold(labels, 2, 10, 4) == folds);
  CHECK_THROWS_AS(eval::stratified_kfold(labels, 2, 1, 3), ValidationError);
}

TEST_CASE("stratified_kfold names the class that is too small") {
  auto labels = balanced_labels(12, 3);
  labels.erase(labels.begin() + 12, labels.begin() + 19);  // class 1 keeps 5 rows
  try {
    eval::stratified_kfold(labels, 3, 10, 0);
    FAIL("expected StratificationError");
  } catch (const StratificationError& e) {
    CHECK(e.class_label() == 1);
    CHECK(std::string(e.what()).find("class 1") != std::string::npos);
  }
}

TEST_CASE("stratified_kfold property: partition with per-class sizes within one") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + rng.uniform_below(9);
    const std::size_t classes = 1 + rng.uniform_below(6);
    std::vector<ClassLabel> labels;
    for (std::size_t c = 0; c < classes; ++c) labels.insert(labels.end(), k + rng.uniform_below(40), ClassLabel(c));
    std::shuffle(labels.begin(), labels.end(), std::mt19937(trial));

    const auto folds = eval::stratified_kfold(labels, classes, k, rng.next_u64());
    std::vector<int> seen(labels.size(), 0);
    for (const auto& f : folds) {
      for (auto i : f) ++seen[i];
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
    for (std::size_t c = 0; c < classes; ++c) {
      std::vector<std::size_t> per_fold;
      for (const auto& f : folds) {
        per_fold.push_back(std::count_if(f.begin(), f.end(), [&](std::size_t i) { return labels[i] == c; }));
      }
      const auto [lo, hi] = std::minmax_element(per_fold.begin(), per_fold.end());
      CHECK(*hi - *lo <= 1);
    }
  }
}

TEST_CASE("confusion_matrix") {
  const std::vector<ClassLabel> t{A, A, B, B}, p{A, B, B, B};
  const auto cm = eval::confusion_matrix(t, p, 2);
  CHECK(cm.cell(A, A) == 1);
  CHECK(cm.cell(A, B) == 1);
  CHECK(cm.cell(B, A) == 0);
  CHECK(cm.cell(B, B) == 2);
  CHECK(cm.tp(A) == 1);
  CHECK(cm.fn(A) == 1);
  CHECK(cm.fp(A) == 0);
  CHECK(cm.tn(A) == 2);

  const auto diag = eval::confusion_matrix(t, t, 2);
  CHECK(diag.cell(A, B) == 0);
  CHECK(diag.trace() == 4);

  const auto empty = eval::confusion_matrix({}, {}, 3);
  CHECK(empty.total() == 0);
  CHECK(empty.rows() == std::vector<std::vector<std::size_t>>(3, std::vector<std::size_t>(3, 0)));

  CHECK_THROWS_AS(eval::confusion_matrix(t, std::vector<ClassLabel>{A}, 2), ValidationError);
  CHECK_THROWS_AS(eval::confusion_matrix(t, std::vector<ClassLabel>{A, A, A, 2}, 2), ValidationError);
}

TEST_CASE("metrics on the two-class example") {
  const auto cm = eval::confusion_matrix(std::vector<ClassLabel>{A, A, B, B}, std::vector<ClassLabel>{A, B, B, B}, 2);
  const auto m = eval::metrics(cm);
  CHECK(m.weighted.accuracy == 0.75);
  CHECK(m.per_class[A].recall == 0.5);
  CHECK(m.per_class[A].specificity == 1.0);
  CHECK(m.per_class[A].auc == 0.75);
  CHECK(m.per_class[B].recall == 1.0);
  CHECK(m.per_class[B].specificity == 0.5);
  CHECK(m.per_class[B].auc == 0.75);
  CHECK(m.weighted.recall == 0.75);
  CHECK(m.weighted.specificity == 0.75);
  CHECK(m.weighted.auc == 0.75);
  CHECK(m.warnings.empty());

  CHECK(eval::per_class_accuracy(cm) == std::vector<double>{0.75, 0.75});
}

TEST_CASE("metrics edge cases") {
  const std::vector<ClassLabel> t{A, B, A, B};
  const auto perfect = eval::metrics(eval::confusion_matrix(t, t, 2));
  CHECK(perfect.weighted.accuracy == 1.0);
  CHECK(perfect.weighted.recall == 1.0);
  CHECK(perfect.weighted.specificity == 1.0);
  CHECK(perfect.weighted.auc == 1.0);
  CHECK(eval::per_class_accuracy(eval::confusion_matrix(t, t, 2)) == std::vector<double>{1.0, 1.0});

  const std::vector<ClassLabel> all_a(4, A);
  CHECK(eval::per_class_accuracy(eval::confusion_matrix(t, all_a, 2))[A] == 0.5);

  // Only class A present and all correct: specificity has no negatives.
  const auto single = eval::metrics(eval::confusion_matrix(all_a, all_a, 1));
  CHECK(single.weighted.accuracy == 1.0);
  CHECK(single.per_class[A].specificity == 0.0);
  REQUIRE(single.warnings.size() == 1);
  CHECK(single.warnings[0].class_label == A);

  // Class B absent from the truth: weight 0, recall 0 with a warning.
  const auto absent = eval::metrics(eval::confusion_matrix(all_a, std::vector<ClassLabel>{A, B, A, A}, 2));
  CHECK(absent.per_class[B].weight == 0.0);
  CHECK(absent.per_class[B].recall == 0.0);
  CHECK_FALSE(absent.warnings.empty());

  CHECK_THROWS_AS(eval::metrics(eval::ConfusionMatrix(2)), ValidationError);
}

TEST_CASE("metrics agree with the pair-loop oracle and stay in range") {
  Rng rng(2718);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + rng.uniform_below(10);
    const std::size_t n = 1 + rng.uniform_below(1000);
    std::vector<ClassLabel> t(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = static_cast<ClassLabel>(rng.uniform_below(k));
      p[i] = rng.uniform01() < 0.6 ? t[i] : static_cast<ClassLabel>(rng.uniform_below(k));
    }
    const auto cm = eval::confusion_matrix(t, p, k);
    const auto m = eval::metrics(cm);
    const auto want = oracle::brute_metrics(t, p, k);
    CHECK(m.weighted.accuracy == Approx(want.accuracy).epsilon(1e-12));
    CHECK(m.weighted.accuracy == double(cm.trace()) / double(n));
    CHECK(m.weighted.recall == Approx(want.recall).epsilon(1e-12));
    CHECK(m.weighted.specificity == Approx(want.specificity).epsilon(1e-12));
    CHECK(m.weighted.auc == Approx(want.auc).epsilon(1e-12));
    double weight_sum = 0;
    for (std::size_t c = 0; c < k; ++c) {
      CHECK(m.per_class[c].recall == Approx(want.class_recall[c]));
      CHECK(m.per_class[c].specificity == Approx(want.class_specificity[c]));
      CHECK(m.per_class[c].accuracy == Approx(want.class_accuracy[c]));
      for (double v : {m.per_class[c].recall, m.per_class[c].specificity, m.per_class[c].auc}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
      weight_sum += m.per_class[c].weight;
    }
    CHECK(weight_sum == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cross_validate on separable data") {
  Rng rng(10);
  Dataset ds(3, 3);
  for (std::size_t i = 0; i < 90; ++i) {
    const auto label = static_cast<ClassLabel>(i % 3);
    ds.add_row(std::vector<double>{rng.uniform(-1, 1), double(label) * 10.0, rng.uniform(-1, 1)}, label);
  }
  forest::ForestParams p;
  p.tree_count = 8;
  p.feature_subset_size = 3;
  p.master_seed = 1;
  const auto report = eval::cross_validate(ds, p, 10, 5);
  CHECK(report.per_fold.size() == 10);
  for (const auto& f : report.per_fold) CHECK(f.metrics.weighted.accuracy == 1.0);
  CHECK(report.headline.accuracy == 1.0);
  CHECK(report.aggregate.total() == 90);
  CHECK(report.aggregate_metrics.weighted.accuracy == 1.0);

  CHECK(eval::cross_validate(ds, p, 10, 5, 3) == report);

  const auto doc = eval::report_to_json(report, LabelMap({"a", "b", "c"}), "rf");
  CHECK(doc["schema_version"] == eval::kReportSchemaVersion);
  CHECK(doc["per_class"].size() == 3);
  CHECK(doc["per_fold"].size() == 10);
  CHECK(doc["confusion_matrix"][1][1] == 30);
  const auto table = eval::format_report_table(doc);
  CHECK(table.find("rf") != std::string::npos);
  CHECK(table.find("1.0000") != std::string::npos);
}
