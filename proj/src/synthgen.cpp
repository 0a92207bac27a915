#include "gaitid/synthgen.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "gaitid/error.hpp"
#include "gaitid/features.hpp"
#include "gaitid/ingest.hpp"
#include "gaitid/random.hpp"

namespace gaitid::synth {

namespace {

constexpr std::size_t kBandSlots = 10;
constexpr double kFirstSlotHz = 1.45;
constexpr double kSlotSpacingHz = 0.1;
constexpr double kSlotJitterHz = 0.025;
constexpr std::uint64_t kSlotStream = 0x5107'5107;

std::size_t frequency_slot(ClassLabel user_id, std::uint64_t seed) {
  if (user_id >= kBandSlots) return user_id;
  std::array<std::size_t, kBandSlots> slots{};
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  Rng rng(derive_seed(seed, kSlotStream));
  for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[rng.uniform_below(i)]);
  return slots[user_id];
}

std::uint64_t user_seed(std::uint64_t seed, ClassLabel user_id) { return derive_seed(seed, user_id); }

}  // namespace

GaitProfile generate_profile(ClassLabel user_id, std::uint64_t seed) {
  if (user_id >= kMaxUsers) {
    throw ValidationError("synthetic users are limited to " + std::to_string(kMaxUsers));
  }
  Rng rng(user_seed(seed, user_id));
  GaitProfile p;
  p.user_id = user_id;
  p.step_freq = kFirstSlotHz + kSlotSpacingHz * static_cast<double>(frequency_slot(user_id, seed)) +
                rng.uniform(-kSlotJitterHz, kSlotJitterHz);
  for (auto& a : p.amplitude) a = rng.uniform(0.8, 2.5);
  for (auto& ph : p.phase) ph = rng.uniform(0.0, 2.0 * std::numbers::pi);
  p.harmonic_2_gain = rng.uniform(0.1, 0.6);
  p.noise_sigma = rng.uniform(1.0, 1.8);
  p.baseline = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-10.1, -9.5)};
  return p;
}

Recording generate_recording(const GaitProfile& profile, double duration_s, double rate_hz, std::uint64_t seed) {
  if (!(duration_s > 0.0)) throw ValidationError("duration must be positive");
  if (!(rate_hz > 0.0)) throw ValidationError("sample rate must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
  Rng rng(seed);
  std::vector<AxialSample> samples(n);
  const double omega = 2.0 * std::numbers::pi * profile.step_freq / rate_hz;
  for (std::size_t k = 0; k < n; ++k) {
    std::array<double, 3> v{};
    const double wk = omega * static_cast<double>(k);
    for (std::size_t a = 0; a < 3; ++a) {
      const double amp = profile.amplitude[a];
      const double ph = profile.phase[a];
      v[a] = profile.baseline[a] + amp * std::sin(wk + ph) +
             profile.harmonic_2_gain * amp * std::sin(2.0 * wk + 2.0 * ph);
      if (profile.noise_sigma > 0.0) v[a] += rng.normal(0.0, profile.noise_sigma);
    }
    samples[k] = {k, v[0], v[1], v[2]};
  }
  return Recording(profile.user_id, rate_hz, std::move(samples));
}

std::vector<SyntheticRecording> generate_corpus(const CorpusConfig& config) {
  if (config.user_count < 2) throw ValidationError("need at least two users");
  if (config.recordings_per_user < 1) throw ValidationError("need at least one recording per user");
  const std::size_t step = ingest::window_step(config.window_width, config.overlap);

  std::vector<SyntheticRecording> corpus;
  for (std::size_t u = 0; u < config.user_count; ++u) {
    const auto user = static_cast<ClassLabel>(u);
    const auto profile = generate_profile(user, config.seed);
    for (std::size_t r = 0; r < config.recordings_per_user; ++r) {
      // Spread windows evenly; earlier recordings take the remainder.
      const std::size_t windows = config.windows_per_user / config.recordings_per_user +
                                  (r < config.windows_per_user % config.recordings_per_user ? 1 : 0);
      if (windows == 0) continue;
      const std::size_t samples = (windows - 1) * step + config.window_width;
      const double duration = static_cast<double>(samples) / config.rate_hz;
      const auto rec_seed = derive_seed(user_seed(config.seed, user), r + 1);
      corpus.push_back({profile, r, rec_seed, duration,
                        generate_recording(profile, duration, config.rate_hz, rec_seed)});
    }
  }
  return corpus;
}

Dataset generate_benchmark_dataset(const CorpusConfig& config, unsigned threads) {
  const auto corpus = generate_corpus(config);
  std::vector<Window> windows;
  for (const auto& rec : corpus) {
    auto w = ingest::segment_windows(rec.recording, config.window_width, config.overlap);
    windows.insert(windows.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
  }
  const auto batch = features::extract_all(windows, threads);
  return Dataset::from_feature_vectors(batch.vectors, config.user_count);
}

LabelMap user_names(std::size_t user_count) {
  std::vector<std::string> names;
  for (std::size_t u = 0; u < user_count; ++u) names.push_back(std::to_string(u + 1));
  return LabelMap(std::move(names));
}

}  // namespace gaitid::synth
