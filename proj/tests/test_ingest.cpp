#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gaitid/error.hpp"
#include "gaitid/ingest.hpp"
#include "gaitid/random.hpp"

using namespace gaitid;

namespace {

Recording ramp(std::size_t n) {
  std::vector<AxialSample> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = {i, double(i), -double(i), 0.5 * double(i)};
  return Recording(0, 50.0, std::move(s));
}

}  // namespace

TEST_CASE("parse_recording reads x,y,z rows") {
  const auto rec = ingest::parse_recording("1.0,2.0,3.0\n4.0,5.0,6.0", 2);
  REQUIRE(rec.size() == 2);
  CHECK(rec.samples()[1].x == 4.0);
  CHECK(rec.samples()[1].z == 6.0);
  CHECK(rec.samples()[1].t == 1);
  CHECK(rec.user_id() == 2);
  CHECK(rec.rate_hz() == 50.0);
}

TEST_CASE("parse_recording header, timestamps and whitespace") {
  const auto rec = ingest::parse_recording("t,x,y,z\r\n0.00, 1, 2, 3\r\n\n0.02,4,5,6\r\n", 0, 100.0);
  REQUIRE(rec.size() == 2);
  CHECK(rec.samples()[0].x == 1.0);
  CHECK(rec.samples()[1].y == 5.0);
  CHECK(rec.rate_hz() == 100.0);
}

TEST_CASE("parse_recording errors") {
  CHECK_THROWS_AS(ingest::parse_recording("", 0), EmptyRecordingError);
  CHECK_THROWS_AS(ingest::parse_recording("x,y,z\n", 0), EmptyRecordingError);
  try {
    ingest::parse_recording("1.0,abc,3.0", 0);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  try {
    ingest::parse_recording("x,y,z\n1,2,3\n4,5\n", 0);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(ingest::parse_recording("1,nan,3", 0), ValidationError);
  CHECK_THROWS_AS(ingest::parse_recording("1,2,inf", 0), ValidationError);
}

TEST_CASE("write_recording round-trips exactly") {
  Rng rng(5);
  std::vector<AxialSample> s(300);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = {i, rng.normal(0, 3), rng.normal(1, 0.1), rng.normal(-9.8, 1)};
  const Recording rec(1, 50.0, s);
  std::stringstream buf;
  ingest::write_recording(buf, rec);
  const auto back = ingest::parse_recording(buf, 1);
  REQUIRE(back.size() == rec.size());
  for (std::size_t i = 0; i < rec.size(); ++i) {
    CHECK(back.samples()[i].x == rec.samples()[i].x);
    CHECK(back.samples()[i].y == rec.samples()[i].y);
    CHECK(back.samples()[i].z == rec.samples()[i].z);
  }
}

TEST_CASE("segment_windows counts and offsets") {
  CHECK(ingest::segment_windows(ramp(100)).size() == 1);
  CHECK(ingest::segment_windows(ramp(99)).empty());

  const auto w = ingest::segment_windows(ramp(200));
  REQUIRE(w.size() == 3);
  CHECK(w[0].series_x.front() == 0.0);
  CHECK(w[1].series_x.front() == 50.0);
  CHECK(w[2].series_x.front() == 100.0);
  CHECK(w[2].series_x.back() == 199.0);
  CHECK(w[1].series_y.front() == -50.0);
  CHECK(w[1].rate_hz == 50.0);
}

TEST_CASE("segment_windows property: count formula, shared samples, arithmetic offsets") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.uniform_below(600);
    const std::size_t width = 2 + rng.uniform_below(120);
    const double overlap = rng.uniform(0.0, 0.95);
    const std::size_t step = ingest::window_step(width, overlap);
    if (n == 0) continue;
    const auto w = ingest::segment_windows(ramp(n), width, overlap);
    const std::size_t expected = n >= width ? (n - width) / step + 1 : 0;
    REQUIRE(w.size() == expected);
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(w[i].size() == width);
      CHECK(w[i].series_x.front() == double(i * step));  // offsets 0, step, 2 step, ...
      if (i > 0 && step < width) {
        // Adjacent windows share width - step samples.
        CHECK(w[i - 1].series_x[step] == w[i].series_x.front());
      }
    }
  }
}

TEST_CASE("segment_windows shares exactly half a window at 50% overlap") {
  const auto w = ingest::segment_windows(ramp(300));
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::size_t shared = 0;
    for (double a : w[i - 1].series_x) {
      shared += std::count(w[i].series_x.begin(), w[i].series_x.end(), a);
    }
    CHECK(shared == 50);
  }
}

TEST_CASE("segment_windows rejects invalid geometry") {
  CHECK_THROWS_AS(ingest::segment_windows(ramp(10), 1), ValidationError);
  CHECK_THROWS_AS(ingest::segment_windows(ramp(10), 4, 1.0), ValidationError);
  CHECK_THROWS_AS(ingest::segment_windows(ramp(10), 4, -0.1), ValidationError);
  CHECK_THROWS_AS(ingest::segment_windows(ramp(10), 2, 0.9), ValidationError);  // step rounds to 0
}

TEST_CASE("load_corpus maps user directories to dense labels") {
  namespace fs = std::filesystem;
  const auto root = fs::temp_directory_path() / "gaitid_test_corpus";
  fs::remove_all(root);
  fs::create_directories(root / "10");
  fs::create_directories(root / "2");
  std::ofstream(root / "10" / "a.csv") << "1,2,3\n";
  std::ofstream(root / "2" / "b.csv") << "x,y,z\n4,5,6\n7,8,9\n";
  std::ofstream(root / "2" / "notes.txt") << "ignored";

  const auto corpus = ingest::load_corpus(root);
  CHECK(corpus.labels.names() == std::vector<std::string>{"2", "10"});
  REQUIRE(corpus.files.size() == 2);
  CHECK(corpus.files[0].user_name == "2");
  CHECK(corpus.files[0].recording.user_id() == 0);
  CHECK(corpus.files[0].recording.size() == 2);
  CHECK(corpus.files[1].recording.user_id() == 1);

  std::ofstream(root / "2" / "c.csv") << "1,2,3\n1,zz,3\n";
  try {
    ingest::load_corpus(root);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("c.csv") != std::string::npos);
    CHECK(e.line() == 2);
  }
  fs::remove_all(root);
}
