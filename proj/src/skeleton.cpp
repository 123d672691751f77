#include "kinemark/skeleton.hpp"

#include <array>

#include "kinemark/error.hpp"

namespace kinemark {

namespace {

constexpr std::array<const char*, kJointCount> kJointNames = {
    "PELVIS",      "LEFT_HIP",      "RIGHT_HIP",   "LEFT_KNEE",
    "RIGHT_KNEE",  "LEFT_ANKLE",    "RIGHT_ANKLE", "LEFT_SHOULDER",
    "RIGHT_SHOULDER", "LEFT_ELBOW", "RIGHT_ELBOW", "LEFT_WRIST",
    "RIGHT_WRIST", "SPINE_CHEST",   "NECK",
};

SkeletonConvention make_depth_tracker() {
  SkeletonConvention c;
  c.name = "depth_tracker_32";
  c.known_labels = {
      "PELVIS",        "SPINE_NAVEL",    "SPINE_CHEST",  "NECK",
      "CLAVICLE_LEFT", "SHOULDER_LEFT",  "ELBOW_LEFT",   "WRIST_LEFT",
      "HAND_LEFT",     "HANDTIP_LEFT",   "THUMB_LEFT",   "CLAVICLE_RIGHT",
      "SHOULDER_RIGHT", "ELBOW_RIGHT",   "WRIST_RIGHT",  "HAND_RIGHT",
      "HANDTIP_RIGHT", "THUMB_RIGHT",    "HIP_LEFT",     "KNEE_LEFT",
      "ANKLE_LEFT",    "FOOT_LEFT",      "HIP_RIGHT",    "KNEE_RIGHT",
      "ANKLE_RIGHT",   "FOOT_RIGHT",     "HEAD",         "NOSE",
      "EYE_LEFT",      "EAR_LEFT",       "EYE_RIGHT",    "EAR_RIGHT",
  };
  c.mapping = {
      {"PELVIS", JointId::Pelvis},
      {"HIP_LEFT", JointId::LeftHip},
      {"HIP_RIGHT", JointId::RightHip},
      {"KNEE_LEFT", JointId::LeftKnee},
      {"KNEE_RIGHT", JointId::RightKnee},
      {"ANKLE_LEFT", JointId::LeftAnkle},
      {"ANKLE_RIGHT", JointId::RightAnkle},
      {"SHOULDER_LEFT", JointId::LeftShoulder},
      {"SHOULDER_RIGHT", JointId::RightShoulder},
      {"ELBOW_LEFT", JointId::LeftElbow},
      {"ELBOW_RIGHT", JointId::RightElbow},
      {"WRIST_LEFT", JointId::LeftWrist},
      {"WRIST_RIGHT", JointId::RightWrist},
      {"SPINE_CHEST", JointId::SpineChest},
      {"NECK", JointId::Neck},
  };
  return c;
}

SkeletonConvention make_mesh_model() {
  SkeletonConvention c;
  c.name = "mesh_model_24";
  for (int i = 0; i < 24; ++i) c.known_labels.insert(std::to_string(i));
  c.mapping = {
      {"0", JointId::Pelvis},      {"1", JointId::LeftHip},
      {"2", JointId::RightHip},    {"4", JointId::LeftKnee},
      {"5", JointId::RightKnee},   {"7", JointId::LeftAnkle},
      {"8", JointId::RightAnkle},  {"16", JointId::LeftShoulder},
      {"17", JointId::RightShoulder}, {"18", JointId::LeftElbow},
      {"19", JointId::RightElbow}, {"20", JointId::LeftWrist},
      {"21", JointId::RightWrist}, {"9", JointId::SpineChest},
      {"12", JointId::Neck},
  };
  return c;
}

}  // namespace

const char* joint_name(JointId id) {
  return kJointNames[static_cast<int>(id)];
}

std::optional<JointId> joint_from_name(const std::string& name) {
  for (int i = 0; i < kJointCount; ++i)
    if (name == kJointNames[i]) return static_cast<JointId>(i);
  return std::nullopt;
}

const char* session_name(Session s) {
  return s == Session::Pre ? "pre" : "post";
}

const char* action_name(Action a) {
  return a == Action::Squat ? "squat" : "sit_to_stand";
}

std::optional<Session> session_from_name(const std::string& name) {
  if (name == "pre") return Session::Pre;
  if (name == "post") return Session::Post;
  return std::nullopt;
}

std::optional<Action> action_from_name(const std::string& name) {
  if (name == "squat") return Action::Squat;
  if (name == "sit_to_stand") return Action::SitToStand;
  return std::nullopt;
}

bool SkeletonConvention::knows(const std::string& label) const {
  return known_labels.count(label) > 0 || mapping.count(label) > 0;
}

const SkeletonConvention& SkeletonConvention::depth_tracker_32() {
  static const SkeletonConvention c = make_depth_tracker();
  return c;
}

const SkeletonConvention& SkeletonConvention::mesh_model_24() {
  static const SkeletonConvention c = make_mesh_model();
  return c;
}

const SkeletonConvention& SkeletonConvention::by_name(const std::string& name) {
  if (name == "depth_tracker_32") return depth_tracker_32();
  if (name == "mesh_model_24") return mesh_model_24();
  throw Error(ErrorCode::BadArgument, "unknown skeleton convention '" + name + "'");
}

void validate_convention(const SkeletonConvention& convention) {
  std::array<int, kJointCount> hits{};
  for (const auto& [label, joint] : convention.mapping) {
    int idx = static_cast<int>(joint);
    if (hits[idx]++ > 0)
      throw Error(ErrorCode::DuplicateJoint,
                  "convention '" + convention.name + "' maps " + label +
                      " onto already-covered joint " + joint_name(joint));
  }
  for (int i = 0; i < kJointCount; ++i)
    if (hits[i] == 0)
      throw Error(ErrorCode::MissingJoint,
                  "convention '" + convention.name + "' does not cover " +
                      kJointNames[i]);
}

}  // namespace kinemark
