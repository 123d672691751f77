#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kinemark/skeleton.hpp"

namespace kinemark {

inline constexpr double kDefaultGapTolerance = 0.2;  // seconds

enum class FindingKind {
  NonMonotonicTimestamp,
  GapExceedsTolerance,
  NonFiniteCoordinate,
  TooFewFrames,
  MissingJoint,
};

const char* finding_kind_name(FindingKind kind);

/// Validation outcome; findings are data, the caller decides what to do.
struct Finding {
  FindingKind kind;
  std::size_t frame_index = 0;
  std::string detail;
};

/// Parses a JSONL skeleton file. The first line is a header object
/// (patient_id, session, source, action); each following line is one frame
/// {"t": seconds, "joints": {"LABEL": [x, y, z], ...}}. The convention is
/// taken from the header's source field.
RawRecording parse_recording(const std::filesystem::path& path);

/// Same, but with an explicit convention; the header's source must agree.
RawRecording parse_recording(const std::filesystem::path& path,
                             const SkeletonConvention& convention);

/// Serialises a recording back to the JSONL format. Coordinates round-trip
/// bit-exactly for finite inputs.
void write_recording(const RawRecording& rec, const std::filesystem::path& path);

/// Rewrites joint labels onto the canonical set and drops extra source
/// joints. Idempotent on recordings that already use canonical labels.
RawRecording map_to_canonical(const RawRecording& rec);
RawRecording map_to_canonical(const RawRecording& rec,
                              const SkeletonConvention& convention);

std::vector<Finding> validate_series(const RawRecording& rec,
                                     double gap_tolerance = kDefaultGapTolerance);

/// Linear per-coordinate interpolation onto the grid t0, t0+dt, ...
/// Output length is floor((t_last - t_first)/dt) + 1. Requires canonical
/// labels and at least two frames.
CanonicalSeries resample_uniform(const RawRecording& rec, double dt);

/// View of a canonical series as a raw recording (canonical labels,
/// timestamps i*dt), used for serialisation and round trips.
RawRecording to_raw(const CanonicalSeries& series);

void write_series(const CanonicalSeries& series, const std::filesystem::path& path);

}  // namespace kinemark
