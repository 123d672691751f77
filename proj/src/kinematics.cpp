#include "kinemark/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "kinemark/error.hpp"

namespace kinemark {

namespace {

constexpr double kMinSegment = 1e-9;  // metres

/// Index of the axis carrying the recording's mediolateral direction: the
/// largest mean |component| of the left-to-right hip vector.
int mediolateral_axis(const CanonicalSeries& series) {
  Vec3 accum = Vec3::Zero();
  for (const auto& frame : series.frames) {
    Vec3 hip = frame[static_cast<int>(JointId::LeftHip)] -
               frame[static_cast<int>(JointId::RightHip)];
    accum += hip.cwiseAbs();
  }
  int axis = 0;
  accum.maxCoeff(&axis);
  return axis;
}

double angle_at(const std::array<Vec3, kJointCount>& frame,
                const AngleDefinition& def, int drop_axis) {
  Vec3 v = frame[static_cast<int>(def.vertex)];
  Vec3 a = frame[static_cast<int>(def.end_a)];
  Vec3 b = frame[static_cast<int>(def.end_b)];
  if (drop_axis >= 0) {
    v[drop_axis] = 0.0;
    a[drop_axis] = 0.0;
    b[drop_axis] = 0.0;
  }
  return joint_angle(a, v, b);
}

double window_stat(std::span<const double> window, Statistic stat) {
  switch (stat) {
    case Statistic::Mean: {
      double sum = 0.0;
      for (double v : window) sum += v;
      return sum / static_cast<double>(window.size());
    }
    case Statistic::Max:
      return *std::max_element(window.begin(), window.end());
    case Statistic::Min:
      return *std::min_element(window.begin(), window.end());
  }
  throw Error(ErrorCode::BadArgument, "unknown statistic");
}

}  // namespace

std::vector<AngleDefinition> default_angle_definitions() {
  return {
      {"left_knee_flexion", JointId::LeftKnee, JointId::LeftHip,
       JointId::LeftAnkle, Projection::None},
      {"right_knee_flexion", JointId::RightKnee, JointId::RightHip,
       JointId::RightAnkle, Projection::None},
      {"left_elbow_flexion", JointId::LeftElbow, JointId::LeftShoulder,
       JointId::LeftWrist, Projection::None},
      {"right_elbow_flexion", JointId::RightElbow, JointId::RightShoulder,
       JointId::RightWrist, Projection::None},
      {"left_arm_abduction", JointId::LeftShoulder, JointId::SpineChest,
       JointId::LeftElbow, Projection::None},
      {"right_arm_abduction", JointId::RightShoulder, JointId::SpineChest,
       JointId::RightElbow, Projection::None},
  };
}

const char* statistic_name(Statistic s) {
  switch (s) {
    case Statistic::Mean: return "mean";
    case Statistic::Max:  return "max";
    case Statistic::Min:  return "min";
  }
  return "?";
}

double joint_angle(const Vec3& h, const Vec3& k, const Vec3& a) {
  const double hk2 = (h - k).squaredNorm();
  const double ak2 = (a - k).squaredNorm();
  if (hk2 < kMinSegment * kMinSegment || ak2 < kMinSegment * kMinSegment)
    throw Error(ErrorCode::DegenerateTriangle,
                "a segment at the vertex is shorter than 1e-9 m");
  const double ha2 = (h - a).squaredNorm();
  double cosine = (hk2 + ak2 - ha2) / (2.0 * std::sqrt(hk2 * ak2));
  cosine = std::clamp(cosine, -1.0, 1.0);
  return std::acos(cosine) * 180.0 / std::numbers::pi;
}

AngleSeries compute_angle_series(const CanonicalSeries& series,
                                 const AngleDefinition& def) {
  AngleSeries out;
  out.definition_name = def.name;
  out.dt = series.dt;
  out.values.reserve(series.frames.size());

  const int drop_axis =
      def.projection == Projection::Sagittal ? mediolateral_axis(series) : -1;
  for (std::size_t i = 0; i < series.frames.size(); ++i) {
    try {
      out.values.push_back(angle_at(series.frames[i], def, drop_axis));
    } catch (const Error& e) {
      throw Error(e.code(), "angle '" + def.name + "': " + e.what(), i);
    }
  }
  return out;
}

std::size_t window_count(std::size_t samples, const WindowSpec& spec) {
  if (spec.length == 0 || spec.stride == 0)
    throw Error(ErrorCode::BadArgument, "window length and stride must be positive");
  if (spec.length > samples) return 0;
  return (samples - spec.length) / spec.stride + 1;
}

std::vector<StatColumn> window_statistics(const AngleSeries& angle,
                                          const WindowSpec& spec) {
  if (spec.length > angle.values.size())
    throw Error(ErrorCode::WindowTooLong,
                "window of " + std::to_string(spec.length) + " frames on " +
                    std::to_string(angle.values.size()) + " samples");
  const std::size_t windows = window_count(angle.values.size(), spec);

  std::vector<StatColumn> columns;
  columns.reserve(spec.statistics.size());
  for (Statistic stat : spec.statistics) {
    StatColumn col;
    col.statistic = stat;
    col.values.reserve(windows);
    for (std::size_t w = 0; w < windows; ++w) {
      std::span<const double> window(angle.values.data() + w * spec.stride,
                                     spec.length);
      col.values.push_back(window_stat(window, stat));
    }
    columns.push_back(std::move(col));
  }
  return columns;
}

FeatureMatrix assemble_feature_matrix(std::span<const CanonicalSeries> recordings,
                                      std::span<const AngleDefinition> defs,
                                      const WindowSpec& spec) {
  if (defs.empty())
    throw Error(ErrorCode::EmptyDefinitions, "no angle definitions given");
  if (recordings.empty())
    throw Error(ErrorCode::NoRecordings, "no recordings to assemble");

  FeatureMatrix m;
  m.patient_id = recordings[0].patient_id;
  m.session = recordings[0].session;
  m.source = recordings[0].source;
  for (const auto& rec : recordings)
    if (rec.patient_id != m.patient_id || rec.session != m.session ||
        rec.source != m.source)
      throw Error(ErrorCode::InconsistentMetadata,
                  "recordings mix patients, sessions, or sources");

  for (const auto& def : defs)
    for (Statistic stat : spec.statistics)
      m.columns.push_back(def.name + "_" + statistic_name(stat));

  std::size_t total_rows = 0;
  for (const auto& rec : recordings)
    total_rows += window_count(rec.frames.size(), spec);
  m.values.resize(static_cast<Eigen::Index>(total_rows),
                  static_cast<Eigen::Index>(m.columns.size()));

  Eigen::Index row0 = 0;
  for (const auto& rec : recordings) {
    const std::size_t rows = window_count(rec.frames.size(), spec);
    Eigen::Index col = 0;
    for (const auto& def : defs) {
      AngleSeries angle = compute_angle_series(rec, def);
      auto stats = window_statistics(angle, spec);
      for (const auto& stat_col : stats) {
        for (std::size_t w = 0; w < rows; ++w)
          m.values(row0 + static_cast<Eigen::Index>(w), col) = stat_col.values[w];
        ++col;
      }
    }
    for (std::size_t w = 0; w < rows; ++w) m.row_actions.push_back(rec.action);
    row0 += static_cast<Eigen::Index>(rows);
  }
  return m;
}

void write_feature_matrix_csv(const FeatureMatrix& matrix,
                              const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::IoFailure, "cannot write " + path.string());

  out << "action";
  for (const auto& col : matrix.columns) out << "," << col;
  out << "\n";
  char buf[40];
  for (Eigen::Index i = 0; i < matrix.values.rows(); ++i) {
    out << action_name(matrix.row_actions[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < matrix.values.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.12g", matrix.values(i, j));
      out << "," << buf;
    }
    out << "\n";
  }
}

}  // namespace kinemark
