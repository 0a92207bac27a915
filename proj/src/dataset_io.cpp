#include "gaitid/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaitid/error.hpp"
#include "gaitid/features.hpp"
#include "gaitid/text.hpp"

namespace gaitid::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_feature_csv(std::ostream& out, const Dataset& ds) {
  if (ds.feature_count() != kFeatureCount) {
    throw SchemaError("feature CSV requires " + std::to_string(kFeatureCount) + " features per row");
  }
  for (const auto& d : features::layout()) out << d.name << ',';
  out << "label\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.row(i)) out << text::format_double(v) << ',';
    out << ds.label(i) << '\n';
  }
}

Dataset read_feature_csv(std::istream& in, std::optional<std::size_t> class_count) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("feature CSV is empty");
  const auto header = split_csv_line(line);

  const auto& lay = features::layout();
  std::vector<std::size_t> column_of(kFeatureCount + 1);
  std::vector<std::string> missing;
  const auto find_column = [&](std::string_view name, std::size_t slot) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      missing.emplace_back(name);
    } else {
      column_of[slot] = static_cast<std::size_t>(it - header.begin());
    }
  };
  for (std::size_t f = 0; f < kFeatureCount; ++f) find_column(lay[f].name, f);
  find_column("label", kFeatureCount);
  if (!missing.empty()) {
    std::string msg = "feature CSV is missing columns:";
    for (const auto& m : missing) msg += " " + m;
    throw SchemaError(msg);
  }

  std::vector<std::vector<double>> rows;
  std::vector<ClassLabel> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()),
                       line_no);
    }
    std::vector<double> row(kFeatureCount);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      const auto v = text::parse_double(fields[column_of[f]]);
      if (!v) throw ParseError("malformed number '" + fields[column_of[f]] + "'", line_no);
      row[f] = *v;
    }
    const auto& label_field = fields[column_of[kFeatureCount]];
    const auto label = text::parse_double(label_field);
    if (!label || *label < 0 || *label != static_cast<double>(static_cast<ClassLabel>(*label))) {
      throw ParseError("malformed label '" + label_field + "'", line_no);
    }
    rows.push_back(std::move(row));
    labels.push_back(static_cast<ClassLabel>(*label));
  }

  std::size_t k = class_count.value_or(0);
  if (!class_count) {
    for (auto l : labels) k = std::max<std::size_t>(k, l + 1);
  }
  Dataset ds(kFeatureCount, std::max<std::size_t>(k, 1));
  for (std::size_t i = 0; i < rows.size(); ++i) ds.add_row(rows[i], labels[i]);
  return ds;
}

void write_feature_csv(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_feature_csv(out, ds);
}

Dataset read_feature_csv(const std::filesystem::path& path, std::optional<std::size_t> class_count) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_feature_csv(in, class_count);
}

void write_label_map(const std::filesystem::path& path, const LabelMap& labels) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << nlohmann::json{{"labels", labels.names()}}.dump(2) << '\n';
}

LabelMap read_label_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    const auto doc = nlohmann::json::parse(in);
    return LabelMap(doc.at("labels").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::filesystem::path label_map_path_for(const std::filesystem::path& feature_csv) {
  auto p = feature_csv;
  p.replace_extension(".labels.json");
  return p;
}

}  // namespace gaitid::io
