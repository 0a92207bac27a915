#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gaitid/signal_model.hpp"

namespace gaitid::ingest {

/// Parses recording CSV: one `x,y,z` row per sample (a leading timestamp
/// column, `t,x,y,z`, is accepted and ignored). An optional single header
/// line is recognised by a non-numeric first token.
///
/// Throws ParseError (with 1-based line) on malformed fields,
/// ValidationError on NaN/Inf, EmptyRecordingError when no samples remain.
Recording parse_recording(std::istream& in, ClassLabel user_id, double rate_hz = kDefaultRateHz);
Recording parse_recording(std::string_view text, ClassLabel user_id, double rate_hz = kDefaultRateHz);

/// Writes `x,y,z` rows with a header, using shortest round-trip formatting so
/// parse_recording reproduces the values exactly.
void write_recording(std::ostream& out, const Recording& rec);

/// Number of samples between window starts: round(width * (1 - overlap)).
std::size_t window_step(std::size_t width, double overlap_fraction);

/// Full-width windows starting at 0, step, 2*step, ...; a trailing partial
/// window is dropped. Throws ValidationError on width < 2, overlap outside
/// [0, 1) or a zero step.
std::vector<Window> segment_windows(const Recording& rec, std::size_t width = kDefaultWindowWidth,
                                    double overlap_fraction = kDefaultOverlap);

struct CorpusFile {
  std::filesystem::path path;
  std::string user_name;
  Recording recording;
};

struct Corpus {
  LabelMap labels;
  std::vector<CorpusFile> files;  // sorted by (label, file name)
};

/// Loads `root/<user_label>/<recording>.csv`. User directories are mapped to
/// dense labels in natural order. Parse errors are rethrown with the file
/// path prepended.
Corpus load_corpus(const std::filesystem::path& root, double rate_hz = kDefaultRateHz);

}  // namespace gaitid::ingest
