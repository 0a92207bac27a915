#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "gaitid/dataset_io.hpp"
#include "gaitid/error.hpp"
#include "gaitid/features.hpp"
#include "gaitid/ingest.hpp"
#include "gaitid/synthgen.hpp"
#include "gaitid/text.hpp"

namespace gaitid::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  auto out = open_for_write(path);
  out << doc.dump(2) << '\n';
}

nlohmann::json profile_json(const synth::GaitProfile& p) {
  return {{"step_freq_hz", p.step_freq},       {"amplitude", p.amplitude},
          {"phase", p.phase},                  {"harmonic_2_gain", p.harmonic_2_gain},
          {"noise_sigma", p.noise_sigma},      {"baseline", p.baseline}};
}

std::pair<Dataset, LabelMap> load_features(const fs::path& path) {
  const auto sidecar = io::label_map_path_for(path);
  if (fs::exists(sidecar)) {
    auto labels = io::read_label_map(sidecar);
    auto data = io::read_feature_csv(path, labels.size());
    return {std::move(data), std::move(labels)};
  }
  auto data = io::read_feature_csv(path);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < data.class_count(); ++c) names.push_back(std::to_string(c));
  return {std::move(data), LabelMap(std::move(names))};
}

std::size_t resolve_plot_feature(const std::string& name) {
  try {
    return features::index_of(name);
  } catch (const ValidationError&) {
    return features::index_of("time_" + name);
  }
}

std::optional<std::size_t> parse_k_try(const std::string& s) {
  if (s == "all") return std::nullopt;
  const auto v = text::parse_double(s);
  if (!v || *v < 1 || *v != static_cast<double>(static_cast<std::size_t>(*v))) {
    throw ValidationError("--k-try expects a positive integer or 'all', got '" + s + "'");
  }
  return static_cast<std::size_t>(*v);
}

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const EmptyRecordingError*>(&e)) return "empty_recording";
  if (dynamic_cast<const StratificationError*>(&e)) return "stratification";
  if (dynamic_cast<const SchemaError*>(&e)) return "schema";
  if (dynamic_cast<const ValidationError*>(&e)) return "validation";
  if (dynamic_cast<const Error*>(&e)) return "error";
  return "internal";
}

}  // namespace

forest::ForestParams ModelOptions::forest_params() const {
  if (model == "dt") {
    auto p = forest::ForestParams::decision_tree(seed);
    p.max_depth = max_depth;
    return p;
  }
  if (model != "rf") throw ValidationError("unknown model '" + model + "' (expected rf or dt)");
  forest::ForestParams p;
  p.tree_count = trees;
  p.feature_subset_size = k_try;
  p.max_depth = max_depth;
  p.master_seed = seed;
  return p;
}

void cmd_synth(const SynthOptions& opts, std::ostream& log) {
  if (opts.users < 2) throw ValidationError("--users must be >= 2 (classification needs two classes)");
  if (opts.out.empty()) throw ValidationError("--out is required");

  synth::CorpusConfig config;
  config.user_count = opts.users;
  config.windows_per_user = opts.windows_per_user;
  config.recordings_per_user = opts.recordings_per_user;
  config.rate_hz = opts.rate_hz;
  config.seed = opts.seed;
  const auto corpus = synth::generate_corpus(config);
  const auto names = synth::user_names(opts.users);

  nlohmann::json manifest;
  manifest["schema_version"] = 1;
  manifest["kind"] = "synth_manifest";
  manifest["seed"] = opts.seed;
  manifest["rate_hz"] = opts.rate_hz;
  manifest["windows_per_user"] = opts.windows_per_user;
  std::map<ClassLabel, nlohmann::json> users;
  for (const auto& rec : corpus) {
    const auto& name = names.name(rec.profile.user_id);
    const auto file = fs::path(name) / ("rec_" + std::to_string(rec.index) + ".csv");
    auto out = open_for_write(opts.out / file);
    ingest::write_recording(out, rec.recording);

    auto& u = users[rec.profile.user_id];
    if (u.is_null()) {
      u = {{"name", name}, {"user_id", rec.profile.user_id}, {"profile", profile_json(rec.profile)},
           {"recordings", nlohmann::json::array()}};
    }
    u["recordings"].push_back({{"file", file.generic_string()},
                               {"seed", rec.seed},
                               {"duration_s", rec.duration_s},
                               {"samples", rec.recording.size()}});
  }
  auto& arr = manifest["users"] = nlohmann::json::array();
  for (auto& [id, u] : users) arr.push_back(std::move(u));
  write_json(opts.out / "manifest.json", manifest);
  log << "wrote " << corpus.size() << " recordings for " << opts.users << " users to " << opts.out.string() << '\n';
}

void cmd_featurize(const FeaturizeOptions& opts, std::ostream& log) {
  if (opts.out.empty()) throw ValidationError("--out is required");
  const auto corpus = ingest::load_corpus(opts.input, opts.rate_hz);

  std::vector<Window> windows;
  std::vector<std::size_t> per_user(corpus.labels.size(), 0);
  for (const auto& file : corpus.files) {
    auto w = ingest::segment_windows(file.recording, opts.width, opts.overlap);
    if (w.empty()) {
      log << "warning: " << file.path.string() << " has " << file.recording.size() << " samples, fewer than "
          << opts.width << "; no windows\n";
    }
    per_user[file.recording.user_id()] += w.size();
    windows.insert(windows.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
  }

  const auto batch = features::extract_all(windows, opts.threads);
  const auto data = Dataset::from_feature_vectors(batch.vectors, corpus.labels.size());
  io::write_feature_csv(opts.out, data);
  io::write_label_map(io::label_map_path_for(opts.out), corpus.labels);

  for (ClassLabel c = 0; c < corpus.labels.size(); ++c) {
    log << "user " << corpus.labels.name(c) << ": " << per_user[c] << " windows\n";
  }
  if (batch.degenerate_windows > 0) {
    log << "warning: " << batch.degenerate_windows << " windows had a near-zero z mean; corr features set to 0\n";
  }
  log << "wrote " << data.size() << " rows to " << opts.out.string() << '\n';

  if (!opts.plot_feature) return;
  const auto slot = resolve_plot_feature(*opts.plot_feature);
  std::vector<ClassLabel> users;
  for (const auto& u : opts.plot_users) users.push_back(corpus.labels.label_of(u));
  if (users.empty()) {
    for (ClassLabel c = 0; c < corpus.labels.size(); ++c) users.push_back(c);
  }
  std::vector<std::vector<double>> series(users.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t u = 0; u < users.size(); ++u) {
      if (data.label(i) == users[u]) series[u].push_back(data.value(i, slot));
    }
  }
  const auto plot_path = opts.plot_out.value_or(
      fs::path(opts.out).replace_extension("." + std::string(features::layout()[slot].name) + ".csv"));
  auto out = open_for_write(plot_path);
  for (std::size_t u = 0; u < users.size(); ++u) out << (u ? "," : "") << corpus.labels.name(users[u]);
  out << '\n';
  std::size_t rows = 0;
  for (const auto& s : series) rows = std::max(rows, s.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t u = 0; u < users.size(); ++u) {
      if (u) out << ',';
      if (r < series[u].size()) out << text::format_double(series[u][r]);
    }
    out << '\n';
  }
  log << "wrote " << features::layout()[slot].name << " series to " << plot_path.string() << '\n';
}

void cmd_train(const TrainOptions& opts, std::ostream& log) {
  if (opts.out.empty()) throw ValidationError("--out is required");
  const auto [data, labels] = load_features(opts.features);
  const auto start = Clock::now();
  const auto model = forest::train_forest(data, opts.model.forest_params(), opts.threads);
  write_json(opts.out, model.to_json(labels));
  log << "trained " << model.trees().size() << " trees on " << data.size() << " rows in " << seconds_since(start)
      << " s; model written to " << opts.out.string() << '\n';
}

nlohmann::json cmd_evaluate(const EvaluateOptions& opts, std::ostream& out) {
  const auto [data, labels] = load_features(opts.features);
  const auto start = Clock::now();
  const auto report = eval::cross_validate(data, opts.model.forest_params(), opts.folds, opts.model.seed, opts.threads);
  auto doc = eval::report_to_json(report, labels, opts.model.model);
  doc["metadata"] = {{"elapsed_seconds", seconds_since(start)},
                     {"threads", opts.threads},
                     {"features", opts.features.string()}};
  if (opts.out) write_json(*opts.out, doc);
  if (opts.format == "json") {
    out << doc.dump(2) << '\n';
  } else if (opts.format == "csv") {
    const auto& h = doc["headline"];
    out << "model,accuracy,auc,recall,specificity\n"
        << opts.model.model << ',' << text::format_double(h["accuracy"].get<double>()) << ','
        << text::format_double(h["auc"].get<double>()) << ',' << text::format_double(h["recall"].get<double>())
        << ',' << text::format_double(h["specificity"].get<double>()) << '\n';
  } else {
    out << eval::format_report_table(doc);
  }
  return doc;
}

std::vector<BenchRow> cmd_bench(const BenchOptions& opts, std::ostream& out) {
  if (opts.repeats < 1) throw ValidationError("--repeats must be >= 1");
  const auto [data, labels] = load_features(opts.features);
  std::vector<BenchRow> rows;
  for (auto t : opts.tree_counts) {
    forest::ForestParams params;
    params.tree_count = t;
    params.feature_subset_size = opts.k_try;
    params.master_seed = opts.seed;

    std::vector<double> times;
    for (std::size_t r = 0; r < opts.repeats; ++r) {
      const auto start = Clock::now();
      const auto model = forest::train_forest(data, params, opts.threads);
      times.push_back(seconds_since(start));
    }
    std::sort(times.begin(), times.end());
    const auto report = eval::cross_validate(data, params, opts.folds, opts.seed, opts.threads);
    rows.push_back({t, times[times.size() / 2], report.headline});
  }

  std::ostringstream csv;
  csv << "trees,train_seconds,accuracy,auc,recall,specificity\n";
  for (const auto& r : rows) {
    csv << r.trees << ',' << text::format_double(r.train_seconds) << ',' << text::format_double(r.cv.accuracy) << ','
        << text::format_double(r.cv.auc) << ',' << text::format_double(r.cv.recall) << ','
        << text::format_double(r.cv.specificity) << '\n';
  }
  if (opts.out) open_for_write(*opts.out) << csv.str();
  out << csv.str();
  return rows;
}

void cmd_report(const ReportOptions& opts, std::ostream& out) {
  std::ifstream in(opts.input);
  if (!in) throw Error("cannot open " + opts.input.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(opts.input.string() + ": " + e.what());
  }
  if (doc.value("kind", std::string()) != "evaluation") throw SchemaError("not an evaluation report");
  if (doc.value("schema_version", 0) != eval::kReportSchemaVersion) {
    throw SchemaError("unsupported report schema version");
  }
  if (opts.format == "json") {
    out << doc.dump(2) << '\n';
  } else if (opts.format == "csv") {
    out << "person,accuracy,recall,specificity,auc\n";
    for (const auto& c : doc.at("per_class")) {
      out << c.at("name").get<std::string>() << ',' << text::format_double(c.at("accuracy").get<double>()) << ','
          << text::format_double(c.at("recall").get<double>()) << ','
          << text::format_double(c.at("specificity").get<double>()) << ','
          << text::format_double(c.at("auc").get<double>()) << '\n';
    }
  } else {
    out << eval::format_report_table(doc);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gait-based person recognition: synthetic data, features, random forest, evaluation"};
  app.require_subcommand(1);

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic multi-user recording corpus");
  synth->add_option("--users", synth_opts.users, "Number of users")->capture_default_str();
  synth->add_option("--windows-per-user", synth_opts.windows_per_user, "Windows each user yields")
      ->capture_default_str();
  synth->add_option("--recordings-per-user", synth_opts.recordings_per_user)->capture_default_str();
  synth->add_option("--rate", synth_opts.rate_hz, "Sample rate (Hz)")->capture_default_str();
  synth->add_option("--seed", synth_opts.seed)->capture_default_str();
  synth->add_option("--out", synth_opts.out, "Output directory")->required();

  FeaturizeOptions feat_opts;
  std::string plot_users;
  auto* feat = app.add_subcommand("featurize", "Window recordings and extract the 30 features");
  feat->add_option("--in", feat_opts.input, "Corpus root: <root>/<user>/<recording>.csv")->required();
  feat->add_option("--out", feat_opts.out, "Feature CSV path")->required();
  feat->add_option("--width", feat_opts.width)->capture_default_str();
  feat->add_option("--overlap", feat_opts.overlap)->capture_default_str();
  feat->add_option("--rate", feat_opts.rate_hz)->capture_default_str();
  feat->add_option("--threads", feat_opts.threads)->capture_default_str();
  feat->add_option("--plot-feature", feat_opts.plot_feature, "Emit a per-window series of this feature");
  feat->add_option("--users", plot_users, "Comma-separated user names for --plot-feature");
  feat->add_option("--plot-out", feat_opts.plot_out);

  ModelOptions model_opts;
  std::string k_try = std::to_string(forest::kDefaultFeatureSubset);
  std::optional<std::size_t> max_depth;
  const auto add_model_flags = [&](CLI::App* sub) {
    sub->add_option("--model", model_opts.model, "rf or dt")->capture_default_str();
    sub->add_option("--trees", model_opts.trees)->capture_default_str();
    sub->add_option("--k-try", k_try, "Features per node, or 'all'")->capture_default_str();
    sub->add_option("--max-depth", max_depth);
    sub->add_option("--seed", model_opts.seed)->capture_default_str();
  };

  TrainOptions train_opts;
  auto* train = app.add_subcommand("train", "Train a forest on a feature CSV and save the model");
  train->add_option("--features", train_opts.features)->required();
  train->add_option("--out", train_opts.out, "Model JSON path")->required();
  train->add_option("--threads", train_opts.threads)->capture_default_str();
  add_model_flags(train);

  EvaluateOptions eval_opts;
  auto* evaluate = app.add_subcommand("evaluate", "Stratified k-fold cross-validation");
  evaluate->add_option("--features", eval_opts.features)->required();
  evaluate->add_option("--out", eval_opts.out, "Report JSON path");
  evaluate->add_option("--folds", eval_opts.folds)->capture_default_str();
  evaluate->add_option("--threads", eval_opts.threads)->capture_default_str();
  evaluate->add_option("--format", eval_opts.format)->check(CLI::IsMember({"table", "json", "csv"}));
  add_model_flags(evaluate);

  BenchOptions bench_opts;
  std::string bench_k_try = std::to_string(forest::kDefaultFeatureSubset);
  auto* bench = app.add_subcommand("bench", "Sweep tree counts: train time and CV performance");
  bench->add_option("--features", bench_opts.features)->required();
  bench->add_option("--out", bench_opts.out, "Bench CSV path");
  bench->add_option("--trees", bench_opts.tree_counts, "Comma-separated tree counts")->delimiter(',');
  bench->add_option("--k-try", bench_k_try)->capture_default_str();
  bench->add_option("--folds", bench_opts.folds)->capture_default_str();
  bench->add_option("--repeats", bench_opts.repeats)->capture_default_str();
  bench->add_option("--seed", bench_opts.seed)->capture_default_str();
  bench->add_option("--threads", bench_opts.threads)->capture_default_str();

  ReportOptions report_opts;
  auto* report = app.add_subcommand("report", "Render an evaluation report");
  report->add_option("--in", report_opts.input)->required();
  report->add_option("--format", report_opts.format)->check(CLI::IsMember({"table", "json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*synth) {
      cmd_synth(synth_opts, out);
    } else if (*feat) {
      std::stringstream ss(plot_users);
      for (std::string u; std::getline(ss, u, ',');) {
        if (!u.empty()) feat_opts.plot_users.push_back(u);
      }
      cmd_featurize(feat_opts, out);
    } else if (*train) {
      model_opts.k_try = parse_k_try(k_try);
      model_opts.max_depth = max_depth;
      train_opts.model = model_opts;
      cmd_train(train_opts, out);
    } else if (*evaluate) {
      model_opts.k_try = parse_k_try(k_try);
      model_opts.max_depth = max_depth;
      eval_opts.model = model_opts;
      cmd_evaluate(eval_opts, out);
    } else if (*bench) {
      bench_opts.k_try = parse_k_try(bench_k_try);
      cmd_bench(bench_opts, out);
    } else if (*report) {
      cmd_report(report_opts, out);
    }
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", {{"type", error_type(e)}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gaitid::cli
