#include "kinemark/synth.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <utility>

#include "kinemark/error.hpp"
#include "kinemark/ingest.hpp"

namespace kinemark {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }

double channel_value(const MotionScript::Channel& c, double t) {
  double v = c.offset_deg + c.amp_deg * std::sin(kTau * c.freq_hz * t + c.phase);
  if (c.jitter_amp_deg != 0.0)
    v += c.jitter_amp_deg * std::sin(kTau * c.jitter_freq_hz * t + c.jitter_phase);
  return v;
}

Vec3 rotate_z(double angle, const Vec3& v) {
  double c = std::cos(angle), s = std::sin(angle);
  return Vec3(c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z());
}

// Fixed torso with planar two-segment limbs. Each limb is laid out so the
// interior angle measured back off the joints equals the driving angle up
// to rounding: legs fold symmetrically about the hip vertical, arms rotate
// about the chest ray.
std::array<Vec3, kJointCount> pose_from_angles(double knee_l, double knee_r,
                                               double elbow_l, double elbow_r,
                                               double abduct_l, double abduct_r) {
  std::array<Vec3, kJointCount> p{};
  auto set = [&p](JointId id, const Vec3& v) { p[static_cast<int>(id)] = v; };

  const Vec3 hip_l(-0.1, 1.0, 0.0), hip_r(0.1, 1.0, 0.0);
  const Vec3 chest(0.0, 1.45, 0.0);
  const Vec3 shoulder_l(-0.2, 1.55, 0.0), shoulder_r(0.2, 1.55, 0.0);
  set(JointId::Pelvis, Vec3(0.0, 1.0, 0.0));
  set(JointId::LeftHip, hip_l);
  set(JointId::RightHip, hip_r);
  set(JointId::SpineChest, chest);
  set(JointId::Neck, Vec3(0.0, 1.6, 0.0));
  set(JointId::LeftShoulder, shoulder_l);
  set(JointId::RightShoulder, shoulder_r);

  auto leg = [&](JointId knee, JointId ankle, const Vec3& hip, double theta_deg) {
    double a = (std::numbers::pi - deg_to_rad(theta_deg)) / 2.0;
    Vec3 k = hip + 0.45 * Vec3(0.0, -std::cos(a), std::sin(a));
    set(knee, k);
    set(ankle, k + 0.45 * Vec3(0.0, -std::cos(a), -std::sin(a)));
  };
  leg(JointId::LeftKnee, JointId::LeftAnkle, hip_l, knee_l);
  leg(JointId::RightKnee, JointId::RightAnkle, hip_r, knee_r);

  auto arm = [&](JointId elbow, JointId wrist, const Vec3& shoulder,
                 double abduct_deg, double elbow_deg, double sign) {
    Vec3 u = (chest - shoulder).normalized();
    Vec3 d = rotate_z(sign * deg_to_rad(abduct_deg), u);
    Vec3 e = shoulder + 0.3 * d;
    Vec3 f = rotate_z(sign * (std::numbers::pi - deg_to_rad(elbow_deg)), d);
    set(elbow, e);
    set(wrist, e + 0.25 * f);
  };
  arm(JointId::LeftElbow, JointId::LeftWrist, shoulder_l, abduct_l, elbow_l, -1.0);
  arm(JointId::RightElbow, JointId::RightWrist, shoulder_r, abduct_r, elbow_r, 1.0);
  return p;
}

std::string patient_label(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%02zu", index);
  return buf;
}

}  // namespace

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal(double mean, double sd) {
  if (have_spare_) {
    have_spare_ = false;
    return mean + sd * spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = kTau * uniform();
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return mean + sd * r * std::cos(a);
}

RawRecording synth_recording(const MotionScript& script, Rng& rng,
                             const std::string& patient_id, Session session,
                             Action action, const std::string& source) {
  if (script.dt <= 0.0)
    throw Error(ErrorCode::BadSampleInterval, "script dt must be positive");
  if (script.duration_s < script.dt)
    throw Error(ErrorCode::TooFewFrames, "script shorter than one sample");
  const SkeletonConvention& conv = SkeletonConvention::by_name(source);

  RawRecording rec;
  rec.patient_id = patient_id;
  rec.session = session;
  rec.source = conv.name;
  rec.action = action;

  std::size_t n =
      static_cast<std::size_t>(std::llround(script.duration_s / script.dt)) + 1;
  rec.frames.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) * script.dt;
    double knee_l = channel_value(script.left_knee, t);
    double knee_r = channel_value(script.right_knee, t);
    double elbow_l = channel_value(script.left_elbow, t);
    double elbow_r = channel_value(script.right_elbow, t);
    double arm_l = channel_value(script.left_arm, t);
    double arm_r = channel_value(script.right_arm, t);
    if (script.noise_sd_deg > 0.0) {
      knee_l += rng.normal(0.0, script.noise_sd_deg);
      knee_r += rng.normal(0.0, script.noise_sd_deg);
      elbow_l += rng.normal(0.0, script.noise_sd_deg);
      elbow_r += rng.normal(0.0, script.noise_sd_deg);
      arm_l += rng.normal(0.0, script.noise_sd_deg);
      arm_r += rng.normal(0.0, script.noise_sd_deg);
    }
    auto pose = pose_from_angles(knee_l, knee_r, elbow_l, elbow_r, arm_l, arm_r);
    RawFrame frame;
    frame.t = t;
    for (const auto& [label, id] : conv.mapping)
      frame.joints[label] = pose[static_cast<int>(id)];
    rec.frames.push_back(std::move(frame));
  }
  return rec;
}

std::vector<RawRecording> generate_pca_cohort(const CohortSpec& spec) {
  std::vector<RawRecording> out;
  Rng rng(spec.seed);
  const std::string source = SkeletonConvention::depth_tracker_32().name;
  for (std::size_t i = 0; i < spec.patients; ++i) {
    MotionScript script;
    script.duration_s = spec.duration_s;
    script.dt = spec.dt;

    // One deep flexion driver shared by both knees; the arms wobble fast,
    // mutually out of phase, so their windowed statistics decorrelate.
    MotionScript::Channel knee{100.0, rng.uniform(40.0, 60.0), 0.5,
                               rng.uniform(0.0, kTau), 0.0, 5.0, 0.0};
    script.left_knee = knee;
    script.right_knee = knee;
    script.left_elbow = {120.0, rng.uniform(2.0, 5.0), rng.uniform(1.1, 1.9),
                         rng.uniform(0.0, kTau), 0.0, 5.0, 0.0};
    script.right_elbow = {120.0, rng.uniform(2.0, 5.0), rng.uniform(1.1, 1.9),
                          rng.uniform(0.0, kTau), 0.0, 5.0, 0.0};
    script.left_arm = {80.0, rng.uniform(2.0, 5.0), rng.uniform(1.1, 1.9),
                       rng.uniform(0.0, kTau), 0.0, 5.0, 0.0};
    script.right_arm = {80.0, rng.uniform(2.0, 5.0), rng.uniform(1.1, 1.9),
                        rng.uniform(0.0, kTau), 0.0, 5.0, 0.0};

    for (std::size_t r = 0; r < spec.repeats; ++r)
      out.push_back(synth_recording(script, rng, patient_label(i), Session::Pre,
                                    Action::Squat, source));
  }
  return out;
}

std::vector<RawRecording> generate_ttest_cohort(const CohortSpec& spec) {
  std::vector<RawRecording> out;
  Rng rng(spec.seed);
  const std::string source = SkeletonConvention::depth_tracker_32().name;
  for (std::size_t i = 0; i < spec.patients; ++i) {
    std::string patient = patient_label(i);

    double amp = rng.uniform(45.0, 60.0);
    double phase = rng.uniform(0.0, kTau);
    double jitter_pre_l = rng.uniform(0.0, kTau);
    double jitter_pre_r = rng.uniform(0.0, kTau);
    double jitter_post_l = rng.uniform(0.0, kTau);
    double jitter_post_r = rng.uniform(0.0, kTau);
    // Post sessions squat a little deeper. That drags the angular impulse
    // up, so only the smoothness gain survives a one-tailed decrease test.
    double drift = rng.uniform(0.03, 0.06);

    MotionScript base;
    base.duration_s = spec.duration_s;
    base.dt = spec.dt;
    base.left_elbow = {120.0, rng.uniform(4.0, 9.0), rng.uniform(0.3, 0.7),
                       rng.uniform(0.0, kTau), 0.0, 5.0, 0.0};
    base.right_elbow = {120.0, rng.uniform(4.0, 9.0), rng.uniform(0.3, 0.7),
                        rng.uniform(0.0, kTau), 0.0, 5.0, 0.0};
    base.left_arm = {80.0, rng.uniform(3.0, 6.0), rng.uniform(0.3, 0.7),
                     rng.uniform(0.0, kTau), 0.0, 5.0, 0.0};
    base.right_arm = {80.0, rng.uniform(3.0, 6.0), rng.uniform(0.3, 0.7),
                      rng.uniform(0.0, kTau), 0.0, 5.0, 0.0};

    MotionScript squat_pre = base;
    squat_pre.left_knee = {110.0, amp, 0.5, phase, 3.0, 5.0, jitter_pre_l};
    squat_pre.right_knee = {110.0, amp, 0.5, phase, 3.0, 5.0, jitter_pre_r};

    MotionScript squat_post = base;
    squat_post.left_knee = {110.0, amp * (1.0 + drift), 0.5, phase,
                            0.3, 5.0, jitter_post_l};
    squat_post.right_knee = {110.0, amp * (1.0 + drift), 0.5, phase,
                             0.3, 5.0, jitter_post_r};

    // Sit-to-stand reuses one script for both sessions, so every descriptor
    // there differs by exactly zero.
    MotionScript sit = base;
    sit.left_knee = {95.0, rng.uniform(25.0, 40.0), rng.uniform(0.35, 0.55),
                     rng.uniform(0.0, kTau), 0.0, 5.0, 0.0};
    sit.right_knee = {95.0, rng.uniform(25.0, 40.0), rng.uniform(0.35, 0.55),
                      rng.uniform(0.0, kTau), 0.0, 5.0, 0.0};

    for (std::size_t r = 0; r < spec.repeats; ++r) {
      out.push_back(synth_recording(squat_pre, rng, patient, Session::Pre,
                                    Action::Squat, source));
      out.push_back(synth_recording(squat_post, rng, patient, Session::Post,
                                    Action::Squat, source));
      out.push_back(synth_recording(sit, rng, patient, Session::Pre,
                                    Action::SitToStand, source));
      out.push_back(synth_recording(sit, rng, patient, Session::Post,
                                    Action::SitToStand, source));
    }
  }
  return out;
}

std::vector<RawRecording> generate_paired_source_cohort(const CohortSpec& spec,
                                                        double slope,
                                                        double intercept_deg) {
  std::vector<RawRecording> out;
  Rng rng(spec.seed);
  const std::string depth = SkeletonConvention::depth_tracker_32().name;
  const std::string mesh = SkeletonConvention::mesh_model_24().name;

  auto distort = [slope, intercept_deg](MotionScript s) {
    for (MotionScript::Channel* c :
         {&s.left_knee, &s.right_knee, &s.left_elbow, &s.right_elbow,
          &s.left_arm, &s.right_arm}) {
      c->offset_deg = slope * c->offset_deg + intercept_deg;
      c->amp_deg = slope * c->amp_deg;
      c->jitter_amp_deg = slope * c->jitter_amp_deg;
    }
    return s;
  };

  for (std::size_t i = 0; i < spec.patients; ++i) {
    std::string patient = patient_label(i);
    for (Session session : {Session::Pre, Session::Post}) {
      for (Action action : {Action::Squat, Action::SitToStand}) {
        MotionScript script;
        script.duration_s = spec.duration_s;
        script.dt = spec.dt;
        script.left_knee = {110.0, rng.uniform(35.0, 45.0),
                            rng.uniform(0.4, 0.6), rng.uniform(0.0, kTau),
                            0.0, 5.0, 0.0};
        script.right_knee = {110.0, rng.uniform(35.0, 45.0),
                             rng.uniform(0.4, 0.6), rng.uniform(0.0, kTau),
                             0.0, 5.0, 0.0};
        script.left_elbow = {120.0, rng.uniform(12.0, 18.0),
                             rng.uniform(0.4, 0.7), rng.uniform(0.0, kTau),
                             0.0, 5.0, 0.0};
        script.right_elbow = {120.0, rng.uniform(12.0, 18.0),
                              rng.uniform(0.4, 0.7), rng.uniform(0.0, kTau),
                              0.0, 5.0, 0.0};
        script.left_arm = {80.0, rng.uniform(8.0, 12.0),
                           rng.uniform(0.3, 0.6), rng.uniform(0.0, kTau),
                           0.0, 5.0, 0.0};
        script.right_arm = {80.0, rng.uniform(8.0, 12.0),
                            rng.uniform(0.3, 0.6), rng.uniform(0.0, kTau),
                            0.0, 5.0, 0.0};
        MotionScript distorted = distort(script);
        for (std::size_t r = 0; r < spec.repeats; ++r) {
          out.push_back(
              synth_recording(script, rng, patient, session, action, depth));
          out.push_back(
              synth_recording(distorted, rng, patient, session, action, mesh));
        }
      }
    }
  }
  return out;
}

void write_cohort(const std::vector<RawRecording>& cohort,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::map<std::string, int> repeat_counts;
  for (const auto& rec : cohort) {
    std::string source = rec.source.empty()
                             ? SkeletonConvention::depth_tracker_32().name
                             : rec.source;
    std::string stem = rec.patient_id + "_" + session_name(rec.session) + "_" +
                       action_name(rec.action);
    int repeat = repeat_counts[stem + "_" + source]++;
    std::filesystem::path file =
        dir / (stem + "_" + std::to_string(repeat) + "_" + source + ".jsonl");
    write_recording(rec, file);
  }
}

}  // namespace kinemark
