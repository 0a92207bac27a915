#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "gaitid/signal_model.hpp"

namespace gaitid::io {

/// Featurized dataset CSV: header of the 30 canonical feature names followed
/// by `label`, one row per window. Values use shortest round-trip formatting.
void write_feature_csv(std::ostream& out, const Dataset& ds);

/// Reads a feature CSV. Columns are matched by name, so order is free; a
/// missing column raises SchemaError naming every absent column. The class
/// count is `class_count` when given, otherwise max(label) + 1.
Dataset read_feature_csv(std::istream& in, std::optional<std::size_t> class_count = std::nullopt);

void write_feature_csv(const std::filesystem::path& path, const Dataset& ds);
Dataset read_feature_csv(const std::filesystem::path& path, std::optional<std::size_t> class_count = std::nullopt);

/// Sidecar mapping dense labels to user names: {"labels": ["1", "2", ...]}.
void write_label_map(const std::filesystem::path& path, const LabelMap& labels);
LabelMap read_label_map(const std::filesystem::path& path);

/// `<features.csv>` -> `<features.labels.json>`.
std::filesystem::path label_map_path_for(const std::filesystem::path& feature_csv);

}  // namespace gaitid::io
