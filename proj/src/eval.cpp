#include "gaitid/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "gaitid/error.hpp"
#include "gaitid/random.hpp"

namespace gaitid::eval {

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const ClassLabel> labels, std::size_t class_count,
                                                       std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("fold count must be >= 2, got " + std::to_string(k));

  std::vector<std::vector<std::size_t>> by_class(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= class_count) throw ValidationError("label outside [0, class_count)");
    by_class[labels[i]].push_back(i);
  }
  for (std::size_t c = 0; c < class_count; ++c) {
    const auto n = by_class[c].size();
    if (n > 0 && n < k) {
      throw StratificationError("class " + std::to_string(c) + " has " + std::to_string(n) + " rows, fewer than " +
                                    std::to_string(k) + " folds",
                                c);
    }
  }

  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t offset = 0;
  for (auto& members : by_class) {
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.uniform_below(i)]);
    }
    for (std::size_t j = 0; j < members.size(); ++j) folds[(offset + j) % k].push_back(members[j]);
    offset += members.size();
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

ConfusionMatrix::ConfusionMatrix(std::size_t class_count) : k_(class_count), cells_(class_count * class_count, 0) {}

void ConfusionMatrix::add(ClassLabel truth, ClassLabel predicted, std::size_t count) {
  if (truth >= k_ || predicted >= k_) throw ValidationError("confusion matrix label out of range");
  cells_[truth * k_ + predicted] += count;
  total_ += count;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.k_ != k_) throw ValidationError("confusion matrices differ in class count");
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
  total_ += other.total_;
  return *this;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t t = 0;
  for (std::size_t c = 0; c < k_; ++c) t += cells_[c * k_ + c];
  return t;
}

std::size_t ConfusionMatrix::support(ClassLabel c) const {
  return std::accumulate(cells_.begin() + static_cast<std::ptrdiff_t>(c * k_),
                         cells_.begin() + static_cast<std::ptrdiff_t>((c + 1) * k_), std::size_t{0});
}

std::size_t ConfusionMatrix::fp(ClassLabel c) const {
  std::size_t s = 0;
  for (std::size_t t = 0; t < k_; ++t) {
    if (t != c) s += cells_[t * k_ + c];
  }
  return s;
}

std::vector<std::vector<std::size_t>> ConfusionMatrix::rows() const {
  std::vector<std::vector<std::size_t>> out(k_);
  for (std::size_t t = 0; t < k_; ++t) {
    out[t].assign(cells_.begin() + static_cast<std::ptrdiff_t>(t * k_),
                  cells_.begin() + static_cast<std::ptrdiff_t>((t + 1) * k_));
  }
  return out;
}

ConfusionMatrix confusion_matrix(std::span<const ClassLabel> y_true, std::span<const ClassLabel> y_pred,
                                 std::size_t class_count) {
  if (y_true.size() != y_pred.size()) throw ValidationError("y_true and y_pred lengths differ");
  ConfusionMatrix cm(class_count);
  for (std::size_t i = 0; i < y_true.size(); ++i) cm.add(y_true[i], y_pred[i]);
  return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw ValidationError("metrics of an empty confusion matrix");
  const double n = static_cast<double>(cm.total());
  Metrics out;
  out.weighted.accuracy = static_cast<double>(cm.trace()) / n;
  for (ClassLabel c = 0; c < cm.class_count(); ++c) {
    ClassMetrics m;
    const auto tp = cm.tp(c), fn = cm.fn(c), fp = cm.fp(c), tn = cm.tn(c);
    m.support = tp + fn;
    m.weight = static_cast<double>(m.support) / n;
    if (tp + fn > 0) {
      m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    } else {
      out.warnings.push_back({c, "no true rows; recall set to 0"});
    }
    if (fp + tn > 0) {
      m.specificity = static_cast<double>(tn) / static_cast<double>(fp + tn);
    } else {
      out.warnings.push_back({c, "no negative rows; specificity set to 0"});
    }
    m.auc = (m.recall + m.specificity) / 2.0;
    m.accuracy = static_cast<double>(tp + tn) / n;
    out.weighted.recall += m.weight * m.recall;
    out.weighted.specificity += m.weight * m.specificity;
    out.weighted.auc += m.weight * m.auc;
    out.per_class.push_back(m);
  }
  return out;
}

std::vector<double> per_class_accuracy(const ConfusionMatrix& cm) {
  std::vector<double> acc(cm.class_count(), 0.0);
  if (cm.total() == 0) return acc;
  for (ClassLabel c = 0; c < cm.class_count(); ++c) {
    acc[c] = static_cast<double>(cm.tp(c) + cm.tn(c)) / static_cast<double>(cm.total());
  }
  return acc;
}

EvaluationReport cross_validate(const Dataset& data, const forest::ForestParams& params, std::size_t k,
                                std::uint64_t seed, unsigned threads) {
  const auto folds = stratified_kfold(data.labels(), data.class_count(), k, seed);

  EvaluationReport report;
  report.params = params;
  report.folds = k;
  report.seed = seed;
  report.aggregate = ConfusionMatrix(data.class_count());

  std::vector<std::size_t> train_rows;
  for (std::size_t f = 0; f < k; ++f) {
    train_rows.clear();
    for (std::size_t g = 0; g < k; ++g) {
      if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train_rows.begin(), train_rows.end());

    auto fold_params = params;
    fold_params.master_seed = derive_seed(params.master_seed, f);
    const auto model = forest::train_forest(data.subset(train_rows), fold_params, threads);

    FoldResult fold;
    fold.test_size = folds[f].size();
    fold.confusion = ConfusionMatrix(data.class_count());
    for (auto i : folds[f]) fold.confusion.add(data.label(i), model.predict(data.row(i)));
    fold.metrics = metrics(fold.confusion);
    report.aggregate += fold.confusion;

    report.headline.accuracy += fold.metrics.weighted.accuracy;
    report.headline.recall += fold.metrics.weighted.recall;
    report.headline.specificity += fold.metrics.weighted.specificity;
    report.headline.auc += fold.metrics.weighted.auc;
    report.per_fold.push_back(std::move(fold));
  }
  const double kd = static_cast<double>(k);
  report.headline.accuracy /= kd;
  report.headline.recall /= kd;
  report.headline.specificity /= kd;
  report.headline.auc /= kd;
  report.aggregate_metrics = metrics(report.aggregate);
  return report;
}

namespace {

nlohmann::json summary_json(const Summary& s) {
  return {{"accuracy", s.accuracy}, {"recall", s.recall}, {"specificity", s.specificity}, {"auc", s.auc}};
}

nlohmann::json warnings_json(const std::vector<MetricWarning>& ws) {
  auto arr = nlohmann::json::array();
  for (const auto& w : ws) arr.push_back({{"class", w.class_label}, {"message", w.message}});
  return arr;
}

}  // namespace

nlohmann::json report_to_json(const EvaluationReport& report, const LabelMap& labels, const std::string& model_name) {
  const auto& p = report.params;
  nlohmann::json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["kind"] = "evaluation";
  doc["model"] = model_name;
  doc["params"] = {{"tree_count", p.tree_count},
                   {"feature_subset_size", p.feature_subset_size ? nlohmann::json(*p.feature_subset_size)
                                                                 : nlohmann::json("all")},
                   {"max_depth", p.max_depth ? nlohmann::json(*p.max_depth) : nlohmann::json(nullptr)},
                   {"min_samples_split", p.min_samples_split},
                   {"bootstrap", p.bootstrap},
                   {"master_seed", p.master_seed}};
  doc["folds"] = report.folds;
  doc["seed"] = report.seed;
  doc["headline"] = summary_json(report.headline);
  doc["aggregate"] = summary_json(report.aggregate_metrics.weighted);

  auto& per_class = doc["per_class"] = nlohmann::json::array();
  const auto& pc = report.aggregate_metrics.per_class;
  for (std::size_t c = 0; c < pc.size(); ++c) {
    per_class.push_back({{"label", c},
                         {"name", c < labels.size() ? labels.name(static_cast<ClassLabel>(c)) : std::to_string(c)},
                         {"support", pc[c].support},
                         {"weight", pc[c].weight},
                         {"accuracy", pc[c].accuracy},
                         {"recall", pc[c].recall},
                         {"specificity", pc[c].specificity},
                         {"auc", pc[c].auc}});
  }

  auto& folds = doc["per_fold"] = nlohmann::json::array();
  for (std::size_t f = 0; f < report.per_fold.size(); ++f) {
    const auto& fr = report.per_fold[f];
    nlohmann::json j = summary_json(fr.metrics.weighted);
    j["fold"] = f;
    j["test_size"] = fr.test_size;
    j["warnings"] = warnings_json(fr.metrics.warnings);
    folds.push_back(std::move(j));
  }
  doc["confusion_matrix"] = report.aggregate.rows();
  doc["warnings"] = warnings_json(report.aggregate_metrics.warnings);
  doc["metadata"] = nlohmann::json::object();
  return doc;
}

std::string format_report_table(const nlohmann::json& report) {
  std::ostringstream out;
  char line[160];
  const auto& h = report.at("headline");
  out << "Model/Metric   Accuracy   AUC      Recall   Specificity\n";
  std::snprintf(line, sizeof line, "%-14s %-10.4f %-8.4f %-8.4f %-8.4f\n",
                report.value("model", std::string("?")).c_str(), h.at("accuracy").get<double>(),
                h.at("auc").get<double>(), h.at("recall").get<double>(), h.at("specificity").get<double>());
  out << line << '\n';
  out << "Person         Accuracy   Recall\n";
  for (const auto& c : report.at("per_class")) {
    std::snprintf(line, sizeof line, "%-14s %-10.4f %-8.4f\n", c.at("name").get<std::string>().c_str(),
                  c.at("accuracy").get<double>(), c.at("recall").get<double>());
    out << line;
  }
  return out.str();
}

}  // namespace gaitid::eval
