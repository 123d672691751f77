#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kinemark/skeleton.hpp"

namespace kinemark {

/// Deterministic RNG (splitmix64 core) so fixtures are identical across
/// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal(double mean = 0.0, double sd = 1.0);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Per-joint sinusoidal pose generator. Joint angles are realised as a
/// planar two-segment linkage per limb so the canonical angle recovers the
/// scripted value exactly up to floating-point rounding.
struct MotionScript {
  // flexion angle in degrees per joint driver:
  //   theta(t) = offset + amp*sin(2*pi*freq*t + phase)
  //            + jitter_amp*sin(2*pi*jitter_freq*t + jitter_phase)
  struct Channel {
    double offset_deg = 90.0;
    double amp_deg = 0.0;
    double freq_hz = 0.5;
    double phase = 0.0;
    double jitter_amp_deg = 0.0;
    double jitter_freq_hz = 5.0;
    double jitter_phase = 0.0;
  };
  Channel left_knee, right_knee;
  Channel left_elbow, right_elbow;
  Channel left_arm, right_arm;  // abduction
  double duration_s = 10.0;
  double dt = 1.0 / 30.0;
  double noise_sd_deg = 0.0;   // additive angle noise, all channels
};

struct CohortSpec {
  std::size_t patients = 20;
  std::uint64_t seed = 1;
  double duration_s = 10.0;
  double dt = 1.0 / 30.0;
  std::size_t repeats = 1;  // recordings per patient/session/action
};

/// Realises a script as a canonical-label raw recording.
RawRecording synth_recording(const MotionScript& script, Rng& rng,
                             const std::string& patient_id, Session session,
                             Action action, const std::string& source);

/// Cohort with dominant knee variation in the squat action; arms stay
/// near-constant so knee features carry the variance.
std::vector<RawRecording> generate_pca_cohort(const CohortSpec& spec);

/// Paired pre/post cohort with a planted post reduction in squat knee jitter
/// (smoothness drops) while every other descriptor is bit-identical across
/// sessions.
std::vector<RawRecording> generate_ttest_cohort(const CohortSpec& spec);

/// Same movements rendered through both skeleton conventions, with a fixed
/// affine distortion on the second source, for calibration tests.
std::vector<RawRecording> generate_paired_source_cohort(const CohortSpec& spec,
                                                        double slope = 0.9,
                                                        double intercept_deg = 4.0);

void write_cohort(const std::vector<RawRecording>& cohort,
                  const std::filesystem::path& dir);

}  // namespace kinemark
