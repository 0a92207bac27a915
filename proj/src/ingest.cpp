#include "gaitid/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gaitid/error.hpp"
#include "gaitid/text.hpp"

namespace gaitid::ingest {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

Recording parse_recording(std::istream& in, ClassLabel user_id, double rate_hz) {
  std::vector<AxialSample> samples;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty()) continue;
    const auto fields = split_fields(content);
    if (first_content_line) {
      first_content_line = false;
      if (!text::parse_double(fields.front())) continue;  // header
    }
    if (fields.size() != 3 && fields.size() != 4) {
      throw ParseError("expected 3 fields (x,y,z) or 4 (t,x,y,z), got " + std::to_string(fields.size()),
                       line_no);
    }
    const std::size_t offset = fields.size() - 3;
    double xyz[3];
    for (std::size_t a = 0; a < 3; ++a) {
      const auto field = fields[offset + a];
      const auto v = text::parse_double(field);
      if (!v) throw ParseError("malformed number '" + std::string(field) + "'", line_no);
      if (!std::isfinite(*v)) {
        throw ValidationError("line " + std::to_string(line_no) + ": non-finite value '" +
                              std::string(field) + "'");
      }
      xyz[a] = *v;
    }
    samples.push_back({samples.size(), xyz[0], xyz[1], xyz[2]});
  }
  if (samples.empty()) throw EmptyRecordingError("recording has no samples");
  return Recording(user_id, rate_hz, std::move(samples));
}

Recording parse_recording(std::string_view text, ClassLabel user_id, double rate_hz) {
  std::istringstream in{std::string(text)};
  return parse_recording(in, user_id, rate_hz);
}

void write_recording(std::ostream& out, const Recording& rec) {
  out << "x,y,z\n";
  for (const auto& s : rec.samples()) {
    out << text::format_double(s.x) << ',' << text::format_double(s.y) << ','
        << text::format_double(s.z) << '\n';
  }
}

std::size_t window_step(std::size_t width, double overlap_fraction) {
  if (width < 2) throw ValidationError("window width must be >= 2");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw ValidationError("overlap fraction must be in [0, 1)");
  }
  const auto step = static_cast<std::size_t>(std::llround(static_cast<double>(width) * (1.0 - overlap_fraction)));
  if (step < 1) throw ValidationError("window step rounds to 0");
  return step;
}

std::vector<Window> segment_windows(const Recording& rec, std::size_t width, double overlap_fraction) {
  const std::size_t step = window_step(width, overlap_fraction);
  std::vector<Window> windows;
  const auto samples = rec.samples();
  if (samples.size() < width) return windows;
  windows.reserve((samples.size() - width) / step + 1);
  for (std::size_t start = 0; start + width <= samples.size(); start += step) {
    Window w;
    w.rate_hz = rec.rate_hz();
    w.user_id = rec.user_id();
    w.series_x.reserve(width);
    w.series_y.reserve(width);
    w.series_z.reserve(width);
    for (std::size_t k = start; k < start + width; ++k) {
      w.series_x.push_back(samples[k].x);
      w.series_y.push_back(samples[k].y);
      w.series_z.push_back(samples[k].z);
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

Corpus load_corpus(const std::filesystem::path& root, double rate_hz) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw Error("input directory not found: " + root.string());

  std::vector<std::string> users;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) users.push_back(entry.path().filename().string());
  }
  if (users.empty()) throw Error("no user directories under " + root.string());

  Corpus corpus{LabelMap::from_unordered(std::move(users)), {}};
  for (ClassLabel label = 0; label < corpus.labels.size(); ++label) {
    const auto& user = corpus.labels.name(label);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root / user)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      std::ifstream in(path);
      if (!in) throw Error("cannot open " + path.string());
      try {
        corpus.files.push_back({path, user, parse_recording(in, label, rate_hz)});
      } catch (const ParseError& e) {
        throw ParseError(path.string() + ":" + std::to_string(e.line()) + ": " + e.detail(), e.line());
      } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
      }
    }
  }
  return corpus;
}

}  // namespace gaitid::ingest
