#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaitid/eval.hpp"
#include "gaitid/forest.hpp"

namespace gaitid::cli {

namespace fs = std::filesystem;

struct SynthOptions {
  std::size_t users = 10;
  std::size_t windows_per_user = 360;
  std::size_t recordings_per_user = 3;
  double rate_hz = kDefaultRateHz;
  std::uint64_t seed = 0;
  fs::path out;
};

struct FeaturizeOptions {
  fs::path input;
  fs::path out;
  std::size_t width = kDefaultWindowWidth;
  double overlap = kDefaultOverlap;
  double rate_hz = kDefaultRateHz;
  unsigned threads = 1;
  std::optional<std::string> plot_feature;
  std::vector<std::string> plot_users;
  std::optional<fs::path> plot_out;
};

struct ModelOptions {
  std::string model = "rf";  // rf | dt
  std::size_t trees = forest::kDefaultTreeCount;
  std::optional<std::size_t> k_try = forest::kDefaultFeatureSubset;
  std::optional<std::size_t> max_depth;
  std::uint64_t seed = 0;

  /// dt ignores trees/k_try: one tree, all features, no bootstrap.
  forest::ForestParams forest_params() const;
};

struct TrainOptions {
  fs::path features;
  fs::path out;
  ModelOptions model;
  unsigned threads = 1;
};

struct EvaluateOptions {
  fs::path features;
  std::optional<fs::path> out;
  ModelOptions model;
  std::size_t folds = eval::kDefaultFolds;
  unsigned threads = 1;
  std::string format = "table";  // table | json | csv
};

struct BenchOptions {
  fs::path features;
  std::optional<fs::path> out;
  std::vector<std::size_t> tree_counts{1, 2, 4, 8, 16, 32, 64, 128};
  std::optional<std::size_t> k_try = forest::kDefaultFeatureSubset;
  std::size_t folds = eval::kDefaultFolds;
  std::size_t repeats = 3;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct ReportOptions {
  fs::path input;
  std::string format = "table";  // table | json | csv
};

/// Writes <out>/<user>/rec_<n>.csv for every user and <out>/manifest.json.
void cmd_synth(const SynthOptions& opts, std::ostream& log);

/// Writes the feature CSV plus its label-map sidecar; optional plot series.
void cmd_featurize(const FeaturizeOptions& opts, std::ostream& log);

/// Trains on the full feature CSV and writes the model document.
void cmd_train(const TrainOptions& opts, std::ostream& log);

/// Cross-validates and returns the report document (metadata included).
nlohmann::json cmd_evaluate(const EvaluateOptions& opts, std::ostream& out);

struct BenchRow {
  std::size_t trees = 0;
  double train_seconds = 0.0;  // median over repeats, full dataset
  eval::Summary cv;
};

std::vector<BenchRow> cmd_bench(const BenchOptions& opts, std::ostream& out);

void cmd_report(const ReportOptions& opts, std::ostream& out);

/// Parses argv and dispatches. Returns the process exit status; failures are
/// reported on `err` as a one-line JSON error object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gaitid::cli
