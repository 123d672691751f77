#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "kinemark/skeleton.hpp"

namespace kinemark {

enum class Projection { None, Sagittal };

/// A named interior angle: the angle at `vertex` between the rays towards
/// `end_a` and `end_b`. With `Projection::Sagittal` the mediolateral
/// coordinate (the axis with the largest mean hip-to-hip component) is
/// dropped before the angle is taken.
struct AngleDefinition {
  std::string name;
  JointId vertex;
  JointId end_a;
  JointId end_b;
  Projection projection = Projection::None;
};

/// Knee and elbow flexion plus arm abduction, left and right.
std::vector<AngleDefinition> default_angle_definitions();

struct AngleSeries {
  std::string definition_name;
  double dt = 1.0 / 30.0;
  std::vector<double> values;  // degrees, each in [0, 180]
};

enum class Statistic { Mean, Max, Min };

const char* statistic_name(Statistic s);

struct WindowSpec {
  std::size_t length = 15;  // frames (0.5 s at 30 Hz)
  std::size_t stride = 1;
  std::vector<Statistic> statistics = {Statistic::Mean, Statistic::Max,
                                       Statistic::Min};
};

struct StatColumn {
  Statistic statistic;
  std::vector<double> values;  // one per window
};

/// Windowed angle statistics with action annotations, one row per window.
struct FeatureMatrix {
  std::string patient_id;
  Session session = Session::Pre;
  std::string source;
  std::vector<std::string> columns;  // "<angle name>_<statistic>"
  std::vector<Action> row_actions;
  Eigen::MatrixXd values;  // rows = windows, cols = features
};

/// Interior angle in degrees at vertex k between rays towards h and a,
/// from the squared segment lengths (law of cosines). Throws
/// DegenerateTriangle when either segment is shorter than 1e-9 m.
double joint_angle(const Vec3& h, const Vec3& k, const Vec3& a);

AngleSeries compute_angle_series(const CanonicalSeries& series,
                                 const AngleDefinition& def);

/// Sliding-window statistics; window count is (N - length)/stride + 1.
std::vector<StatColumn> window_statistics(const AngleSeries& angle,
                                          const WindowSpec& spec);

std::size_t window_count(std::size_t samples, const WindowSpec& spec);

/// Concatenates windowed rows from all recordings into one annotated
/// matrix. All recordings must share patient, session and source.
FeatureMatrix assemble_feature_matrix(std::span<const CanonicalSeries> recordings,
                                      std::span<const AngleDefinition> defs,
                                      const WindowSpec& spec);

void write_feature_matrix_csv(const FeatureMatrix& matrix,
                              const std::filesystem::path& path);

}  // namespace kinemark
