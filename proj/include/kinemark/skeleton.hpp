#pragma once

#include <Eigen/Core>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kinemark {

using Vec3 = Eigen::Vector3d;

/// Canonical joint set shared by every supported pose source.
enum class JointId : int {
  Pelvis = 0,
  LeftHip,
  RightHip,
  LeftKnee,
  RightKnee,
  LeftAnkle,
  RightAnkle,
  LeftShoulder,
  RightShoulder,
  LeftElbow,
  RightElbow,
  LeftWrist,
  RightWrist,
  SpineChest,
  Neck,
};

inline constexpr int kJointCount = 15;

const char* joint_name(JointId id);
std::optional<JointId> joint_from_name(const std::string& name);

enum class Session { Pre, Post };
enum class Action { Squat, SitToStand };

const char* session_name(Session s);
const char* action_name(Action a);
std::optional<Session> session_from_name(const std::string& name);
std::optional<Action> action_from_name(const std::string& name);

/// Maps one pose source's joint labels onto the canonical set.
///
/// `mapping` is injective onto the canonical joints and covers all of them;
/// `known_labels` is the full label set the source may emit, including
/// joints that are dropped after mapping (hands, feet, face, ...).
struct SkeletonConvention {
  std::string name;
  std::map<std::string, JointId> mapping;
  std::set<std::string> known_labels;

  bool knows(const std::string& label) const;

  /// Azure-Kinect-style 32-joint tracker labels (KNEE_LEFT, ...).
  static const SkeletonConvention& depth_tracker_32();
  /// SMPL-style 24-joint mesh regressor; labels are joint indices "0".."23".
  static const SkeletonConvention& mesh_model_24();
  static const SkeletonConvention& by_name(const std::string& name);
};

/// Throws when the convention violates injectivity or canonical coverage.
void validate_convention(const SkeletonConvention& convention);

struct RawFrame {
  double t = 0.0;  // seconds
  std::map<std::string, Vec3> joints;
};

/// One recording as parsed from disk; joint labels are source labels until
/// map_to_canonical rewrites them.
struct RawRecording {
  std::string patient_id;
  Session session = Session::Pre;
  std::string source;  // convention name
  Action action = Action::Squat;
  std::vector<RawFrame> frames;
};

/// Uniformly resampled positions of the canonical joints, metres, y-up.
struct CanonicalSeries {
  std::string patient_id;
  Session session = Session::Pre;
  std::string source;
  Action action = Action::Squat;
  double dt = 1.0 / 30.0;
  std::vector<std::array<Vec3, kJointCount>> frames;

  const Vec3& at(std::size_t frame, JointId joint) const {
    return frames[frame][static_cast<int>(joint)];
  }
};

}  // namespace kinemark
