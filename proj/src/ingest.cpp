#include "kinemark/ingest.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kinemark/error.hpp"

namespace kinemark {

namespace {

using nlohmann::json;

const char* kFindingNames[] = {
    "NonMonotonicTimestamp", "GapExceedsTolerance", "NonFiniteCoordinate",
    "TooFewFrames", "MissingJoint",
};

/// 17 significant digits round-trip IEEE doubles exactly; a trailing ".0"
/// keeps integral values (including -0.0) typed as JSON floats.
std::string format_coord(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

double coordinate(const json& value, std::size_t line) {
  if (!value.is_number())
    throw Error(ErrorCode::NonFiniteCoordinate,
                "coordinate is not a finite number", line);
  double v = value.get<double>();
  if (!std::isfinite(v))
    throw Error(ErrorCode::NonFiniteCoordinate, "coordinate is not finite", line);
  return v;
}

void check_labels_known(const RawFrame& frame, const SkeletonConvention& conv,
                        std::size_t line) {
  for (const auto& [label, pos] : frame.joints) {
    (void)pos;
    if (!conv.knows(label) && !joint_from_name(label))
      throw Error(ErrorCode::UnknownJointLabel,
                  "label '" + label + "' is not part of " + conv.name, line);
  }
}

/// A frame covers the canonical set when, for every canonical joint, it
/// carries either the source label or the canonical name itself. Returns
/// the source label of the first uncovered joint, empty when complete.
std::string first_missing_joint(const RawFrame& frame,
                                const SkeletonConvention& conv) {
  std::array<bool, kJointCount> present{};
  for (const auto& [label, joint] : conv.mapping)
    if (frame.joints.count(label)) present[static_cast<int>(joint)] = true;
  for (int j = 0; j < kJointCount; ++j)
    if (!present[j] && frame.joints.count(joint_name(static_cast<JointId>(j))))
      present[j] = true;
  for (const auto& [label, joint] : conv.mapping)
    if (!present[static_cast<int>(joint)]) return label;
  return {};
}

RawRecording parse_impl(const std::filesystem::path& path,
                        const SkeletonConvention* required) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoFailure, "cannot open " + path.string());

  RawRecording rec;
  const SkeletonConvention* conv = nullptr;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw Error(ErrorCode::MalformedLine, "line is not a JSON object", line_no);

    if (!conv) {
      if (!j.contains("patient_id") || !j.contains("session") ||
          !j.contains("source") || !j.contains("action") ||
          !j.at("patient_id").is_string() || !j.at("session").is_string() ||
          !j.at("source").is_string() || !j.at("action").is_string())
        throw Error(ErrorCode::MalformedLine, "bad or missing header fields",
                    line_no);
      rec.patient_id = j.at("patient_id").get<std::string>();
      rec.source = j.at("source").get<std::string>();
      auto session = session_from_name(j.at("session").get<std::string>());
      auto action = action_from_name(j.at("action").get<std::string>());
      if (!session || !action)
        throw Error(ErrorCode::MalformedLine, "bad session or action", line_no);
      rec.session = *session;
      rec.action = *action;
      conv = &SkeletonConvention::by_name(rec.source);
      if (required && required->name != conv->name)
        throw Error(ErrorCode::InconsistentMetadata,
                    "header source " + rec.source + " does not match " +
                        required->name);
      continue;
    }

    if (!j.contains("t") || !j.at("t").is_number() || !j.contains("joints") ||
        !j.at("joints").is_object())
      throw Error(ErrorCode::MalformedLine, "frame needs t and joints", line_no);

    RawFrame frame;
    frame.t = j.at("t").get<double>();
    for (const auto& [label, arr] : j.at("joints").items()) {
      if (!arr.is_array() || arr.size() != 3)
        throw Error(ErrorCode::MalformedLine,
                    "joint '" + label + "' is not an [x, y, z] array", line_no);
      frame.joints[label] = Vec3(coordinate(arr[0], line_no),
                                 coordinate(arr[1], line_no),
                                 coordinate(arr[2], line_no));
    }
    check_labels_known(frame, *conv, line_no);
    if (std::string missing = first_missing_joint(frame, *conv); !missing.empty())
      throw Error(ErrorCode::MissingJoint, "line lacks joint " + missing, line_no);
    rec.frames.push_back(std::move(frame));
  }
  if (!conv)
    throw Error(ErrorCode::MalformedLine, "file has no header line", 1);
  return rec;
}

const SkeletonConvention& convention_for(const RawRecording& rec) {
  return rec.source.empty() ? SkeletonConvention::depth_tracker_32()
                            : SkeletonConvention::by_name(rec.source);
}

}  // namespace

const char* finding_kind_name(FindingKind kind) {
  return kFindingNames[static_cast<int>(kind)];
}

RawRecording parse_recording(const std::filesystem::path& path) {
  return parse_impl(path, nullptr);
}

RawRecording parse_recording(const std::filesystem::path& path,
                             const SkeletonConvention& convention) {
  return parse_impl(path, &convention);
}

void write_recording(const RawRecording& rec, const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::IoFailure, "cannot write " + path.string());

  out << "{\"patient_id\":" << json(rec.patient_id).dump()
      << ",\"session\":\"" << session_name(rec.session) << "\",\"source\":"
      << json(rec.source).dump() << ",\"action\":\"" << action_name(rec.action)
      << "\"}\n";
  for (const auto& frame : rec.frames) {
    out << "{\"t\":" << format_coord(frame.t) << ",\"joints\":{";
    bool first = true;
    for (const auto& [label, pos] : frame.joints) {
      if (!first) out << ",";
      first = false;
      out << json(label).dump() << ":[" << format_coord(pos.x()) << ","
          << format_coord(pos.y()) << "," << format_coord(pos.z()) << "]";
    }
    out << "}}\n";
  }
  if (!out)
    throw Error(ErrorCode::IoFailure, "short write to " + path.string());
}

RawRecording map_to_canonical(const RawRecording& rec) {
  return map_to_canonical(rec, convention_for(rec));
}

RawRecording map_to_canonical(const RawRecording& rec,
                              const SkeletonConvention& convention) {
  RawRecording out;
  out.patient_id = rec.patient_id;
  out.session = rec.session;
  out.source = rec.source;
  out.action = rec.action;
  out.frames.reserve(rec.frames.size());

  for (std::size_t i = 0; i < rec.frames.size(); ++i) {
    RawFrame frame;
    frame.t = rec.frames[i].t;
    for (const auto& [label, pos] : rec.frames[i].joints) {
      std::string target;
      auto mapped = convention.mapping.find(label);
      if (mapped != convention.mapping.end()) {
        target = joint_name(mapped->second);
      } else if (joint_from_name(label)) {
        target = label;
      } else {
        continue;  // known but unmapped source joint (hands, face, ...)
      }
      if (frame.joints.count(target))
        throw Error(ErrorCode::DuplicateJoint,
                    "joint " + target + " appears twice in frame", i);
      frame.joints[target] = pos;
    }
    for (int j = 0; j < kJointCount; ++j)
      if (!frame.joints.count(joint_name(static_cast<JointId>(j))))
        throw Error(ErrorCode::UnmappedJoint,
                    std::string("no source joint maps to ") +
                        joint_name(static_cast<JointId>(j)),
                    i);
    out.frames.push_back(std::move(frame));
  }
  return out;
}

std::vector<Finding> validate_series(const RawRecording& rec, double gap_tolerance) {
  std::vector<Finding> findings;
  if (rec.frames.size() < 2) {
    findings.push_back({FindingKind::TooFewFrames, 0,
                        "recording has " + std::to_string(rec.frames.size()) +
                            " frame(s), need at least 2"});
    return findings;
  }

  const SkeletonConvention& conv = convention_for(rec);
  for (std::size_t i = 0; i < rec.frames.size(); ++i) {
    const RawFrame& frame = rec.frames[i];
    if (i > 0) {
      double gap = frame.t - rec.frames[i - 1].t;
      if (gap <= 0.0) {
        findings.push_back({FindingKind::NonMonotonicTimestamp, i,
                            "timestamp does not increase"});
      } else if (gap > gap_tolerance) {
        findings.push_back({FindingKind::GapExceedsTolerance, i,
                            "gap of " + std::to_string(gap) + " s"});
      }
    }

    bool finite = true;
    for (const auto& [label, pos] : frame.joints) {
      if (!pos.allFinite()) {
        findings.push_back({FindingKind::NonFiniteCoordinate, i,
                            "joint " + label + " has a non-finite coordinate"});
        finite = false;
        break;
      }
    }
    if (!finite) continue;

    if (std::string missing = first_missing_joint(frame, conv); !missing.empty())
      findings.push_back({FindingKind::MissingJoint, i,
                          "frame lacks joint " + missing});
  }
  return findings;
}

CanonicalSeries resample_uniform(const RawRecording& rec, double dt) {
  if (!(dt > 0.0))
    throw Error(ErrorCode::BadSampleInterval,
                "sample interval must be positive, got " + std::to_string(dt));
  if (rec.frames.size() < 2)
    throw Error(ErrorCode::TooFewFrames, "resampling needs at least 2 frames");

  const std::size_t n = rec.frames.size();
  std::vector<std::array<Vec3, kJointCount>> raw(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int j = 0; j < kJointCount; ++j) {
      auto it = rec.frames[i].joints.find(joint_name(static_cast<JointId>(j)));
      if (it == rec.frames[i].joints.end())
        throw Error(ErrorCode::MissingJoint,
                    std::string("frame lacks canonical joint ") +
                        joint_name(static_cast<JointId>(j)),
                    i);
      raw[i][j] = it->second;
    }

  const double t0 = rec.frames.front().t;
  const double t_last = rec.frames.back().t;
  const std::size_t count =
      static_cast<std::size_t>(std::floor((t_last - t0) / dt + 1e-9)) + 1;

  CanonicalSeries series;
  series.patient_id = rec.patient_id;
  series.session = rec.session;
  series.source = rec.source;
  series.action = rec.action;
  series.dt = dt;
  series.frames.resize(count);

  std::size_t k = 0;
  for (std::size_t i = 0; i < count; ++i) {
    double t = t0 + static_cast<double>(i) * dt;
    if (t > t_last) t = t_last;
    while (k + 2 < n && rec.frames[k + 1].t <= t) ++k;
    double span = rec.frames[k + 1].t - rec.frames[k].t;
    double u = span > 0.0 ? (t - rec.frames[k].t) / span : 0.0;
    if (u < 0.0) u = 0.0;
    if (u > 1.0) u = 1.0;
    for (int j = 0; j < kJointCount; ++j)
      series.frames[i][j] = raw[k][j] * (1.0 - u) + raw[k + 1][j] * u;
  }
  return series;
}

RawRecording to_raw(const CanonicalSeries& series) {
  RawRecording rec;
  rec.patient_id = series.patient_id;
  rec.session = series.session;
  rec.source = series.source;
  rec.action = series.action;
  rec.frames.reserve(series.frames.size());
  for (std::size_t i = 0; i < series.frames.size(); ++i) {
    RawFrame frame;
    frame.t = static_cast<double>(i) * series.dt;
    for (int j = 0; j < kJointCount; ++j)
      frame.joints[joint_name(static_cast<JointId>(j))] = series.frames[i][j];
    rec.frames.push_back(std::move(frame));
  }
  return rec;
}

void write_series(const CanonicalSeries& series, const std::filesystem::path& path) {
  write_recording(to_raw(series), path);
}

}  // namespace kinemark
