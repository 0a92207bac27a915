#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaitid/forest.hpp"
#include "gaitid/signal_model.hpp"

namespace gaitid::eval {

inline constexpr std::size_t kDefaultFolds = 10;
inline constexpr int kReportSchemaVersion = 1;

/// Partitions row indices into k folds. Each class is shuffled with `seed`
/// and dealt round-robin, so per-class fold sizes differ by at most one.
/// Throws ValidationError for k < 2 and StratificationError when a present
/// class has fewer than k rows. Each fold is returned in ascending order.
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const ClassLabel> labels, std::size_t class_count,
                                                       std::size_t k, std::uint64_t seed);

/// cell(true, predicted) counts; per-class tp/fp/fn/tn use one-vs-rest.
class ConfusionMatrix {
public:
  explicit ConfusionMatrix(std::size_t class_count);

  void add(ClassLabel truth, ClassLabel predicted, std::size_t count = 1);
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  std::size_t class_count() const noexcept { return k_; }
  std::size_t cell(ClassLabel truth, ClassLabel predicted) const { return cells_[truth * k_ + predicted]; }
  std::size_t total() const noexcept { return total_; }
  std::size_t trace() const;

  std::size_t support(ClassLabel c) const;  // rows whose true class is c
  std::size_t tp(ClassLabel c) const { return cell(c, c); }
  std::size_t fn(ClassLabel c) const { return support(c) - tp(c); }
  std::size_t fp(ClassLabel c) const;
  std::size_t tn(ClassLabel c) const { return total_ - tp(c) - fn(c) - fp(c); }

  std::vector<std::vector<std::size_t>> rows() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
  std::size_t k_;
  std::vector<std::size_t> cells_;
  std::size_t total_ = 0;
};

/// Throws ValidationError on length mismatch or a label outside [0, K).
ConfusionMatrix confusion_matrix(std::span<const ClassLabel> y_true, std::span<const ClassLabel> y_pred,
                                 std::size_t class_count);

struct MetricWarning {
  ClassLabel class_label = 0;
  std::string message;

  friend bool operator==(const MetricWarning&, const MetricWarning&) = default;
};

struct ClassMetrics {
  std::size_t support = 0;
  double weight = 0.0;       // n_c / n
  double recall = 0.0;       // tp / (tp + fn)
  double specificity = 0.0;  // tn / (fp + tn)
  double auc = 0.0;          // (recall + specificity) / 2
  double accuracy = 0.0;     // (tp + tn) / n, one-vs-rest

  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

/// Accuracy is n_correct / n; the others are sums over classes of weight * metric.
struct Summary {
  double accuracy = 0.0;
  double recall = 0.0;
  double specificity = 0.0;
  double auc = 0.0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

struct Metrics {
  std::vector<ClassMetrics> per_class;
  Summary weighted;
  /// A class with no true rows gets recall 0; no negatives gives specificity 0.
  std::vector<MetricWarning> warnings;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// Throws ValidationError when the matrix is empty.
Metrics metrics(const ConfusionMatrix& cm);

/// (tp_c + tn_c) / n for each class.
std::vector<double> per_class_accuracy(const ConfusionMatrix& cm);

struct FoldResult {
  std::size_t test_size = 0;
  ConfusionMatrix confusion{0};
  Metrics metrics;

  friend bool operator==(const FoldResult&, const FoldResult&) = default;
};

struct EvaluationReport {
  forest::ForestParams params;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::vector<FoldResult> per_fold;
  /// Mean over folds of each fold's summary; the headline figures.
  Summary headline;
  ConfusionMatrix aggregate{0};
  Metrics aggregate_metrics;

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

/// Stratified k-fold CV of a forest. Fold i trains on the other folds with
/// master seed derive_seed(params.master_seed, i) and predicts fold i.
EvaluationReport cross_validate(const Dataset& data, const forest::ForestParams& params,
                                 std::size_t k = kDefaultFolds, std::uint64_t seed = 0, unsigned threads = 1);

/// Structured report document. `model_name` is "rf", "dt" or similar.
nlohmann::json report_to_json(const EvaluationReport& report, const LabelMap& labels, const std::string& model_name);

/// Human-readable tables: one model row (accuracy, AUC, recall, specificity)
/// followed by per-person accuracy and recall. Reads a report document.
std::string format_report_table(const nlohmann::json& report);

}  // namespace gaitid::eval
