#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gaitid/signal_model.hpp"

namespace gaitid::synth {

/// Per-user walking signature. Each axis follows
///   baseline + amp sin(2 pi f t + phase) + h amp sin(4 pi f t + 2 phase) + N(0, sigma).
struct GaitProfile {
  ClassLabel user_id = 0;
  double step_freq = 0.0;  // Hz
  std::array<double, 3> amplitude{};
  std::array<double, 3> phase{};  // radians
  double harmonic_2_gain = 0.0;
  double noise_sigma = 0.0;
  std::array<double, 3> baseline{};

  friend bool operator==(const GaitProfile&, const GaitProfile&) = default;
};

/// Users that receive a guaranteed-distinct step frequency per seed.
inline constexpr std::size_t kMaxUsers = 36;

/// Parameters are drawn from (seed, user_id). Step frequencies sit on a
/// 0.1 Hz grid with +-0.025 Hz jitter; users 0-9 occupy a seed-shuffled set
/// of slots inside 1.4-2.4 Hz and later users continue above 2.4 Hz, so any
/// two users of one seed differ by at least 0.05 Hz. Throws ValidationError
/// for user_id >= kMaxUsers.
GaitProfile generate_profile(ClassLabel user_id, std::uint64_t seed);

/// Samples the profile for round(duration_s * rate_hz) samples; noise comes
/// from `seed`. Throws ValidationError unless duration_s > 0 and rate_hz > 0.
Recording generate_recording(const GaitProfile& profile, double duration_s, double rate_hz, std::uint64_t seed);

struct CorpusConfig {
  std::size_t user_count = 10;
  std::size_t windows_per_user = 360;
  std::size_t recordings_per_user = 3;
  double rate_hz = kDefaultRateHz;
  std::size_t window_width = kDefaultWindowWidth;
  double overlap = kDefaultOverlap;
  std::uint64_t seed = 0;
};

struct SyntheticRecording {
  GaitProfile profile;
  std::size_t index = 0;  // recording number within the user
  std::uint64_t seed = 0;
  double duration_s = 0.0;
  Recording recording;
};

/// Recordings sized so that segmenting them yields exactly windows_per_user
/// windows per user, spread over recordings_per_user recordings. Ordered by
/// (user, recording). Throws ValidationError for fewer than two users.
std::vector<SyntheticRecording> generate_corpus(const CorpusConfig& config);

/// Segments and featurizes generate_corpus(config); one class per user.
Dataset generate_benchmark_dataset(const CorpusConfig& config, unsigned threads = 1);

/// User names used when writing a corpus to disk: "1", "2", ...
LabelMap user_names(std::size_t user_count);

}  // namespace gaitid::synth
