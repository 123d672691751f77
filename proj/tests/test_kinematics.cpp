#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "kinemark/error.hpp"
#include "kinemark/kinematics.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace kinemark;

namespace {

oracle::Vec to_oracle(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

Vec3 random_point(oracle::Rng& rng, double scale = 2.0) {
  return Vec3(rng.uniform(-scale, scale), rng.uniform(-scale, scale),
              rng.uniform(-scale, scale));
}

CanonicalSeries series_with(const std::vector<std::array<Vec3, kJointCount>>& frames) {
  CanonicalSeries s;
  s.patient_id = "p01";
  s.frames = frames;
  return s;
}

std::array<Vec3, kJointCount> blank_frame() {
  std::array<Vec3, kJointCount> f;
  for (int j = 0; j < kJointCount; ++j) f[j] = Vec3(0.05 * j, 0.1 * j, 0.0);
  return f;
}

AngleSeries make_series(std::vector<double> values, double dt = 1.0 / 30.0) {
  AngleSeries s;
  s.definition_name = "test";
  s.dt = dt;
  s.values = std::move(values);
  return s;
}

}  // namespace

TEST_CASE("joint_angle: collinear, orthogonal, and 45-degree cases") {
  CHECK(joint_angle(Vec3(0, 2, 0), Vec3(0, 1, 0), Vec3(0, 0, 0)) ==
        doctest::Approx(180.0).epsilon(1e-12));
  CHECK(joint_angle(Vec3(0, 1, 0), Vec3(0, 0, 0), Vec3(1, 0, 0)) ==
        doctest::Approx(90.0).epsilon(1e-12));

  Vec3 h(0, 2, 0), k(0, 0, 0), a(1, 1, 0);
  double expect = oracle::angle_deg(to_oracle(h), to_oracle(k), to_oracle(a));
  CHECK(expect == doctest::Approx(45.0).epsilon(1e-12));
  CHECK(joint_angle(h, k, a) == doctest::Approx(expect).epsilon(1e-11));
}

TEST_CASE("joint_angle: degenerate segment") {
  try {
    (void)joint_angle(Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(1, 0, 0));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateTriangle);
  }
  CHECK_THROWS_AS(
      (void)joint_angle(Vec3(1, 0, 0), Vec3(0, 0, 0), Vec3(5e-10, 0, 0)), Error);
}

TEST_CASE("joint_angle: matches the dot-product oracle on random triples") {
  oracle::Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    Vec3 h = random_point(rng), k = random_point(rng), a = random_point(rng);
    if ((h - k).norm() < 1e-3 || (a - k).norm() < 1e-3) continue;
    double ours = joint_angle(h, k, a);
    double ref = oracle::angle_deg(to_oracle(h), to_oracle(k), to_oracle(a));
    CHECK(std::fabs(ours - ref) < 1e-9);
  }
}

TEST_CASE("joint_angle: invariant under rigid motion and uniform scale") {
  oracle::Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    Vec3 h = random_point(rng), k = random_point(rng), a = random_point(rng);
    if ((h - k).norm() < 1e-3 || (a - k).norm() < 1e-3) continue;
    Eigen::Vector3d axis = random_point(rng);
    if (axis.norm() < 1e-6) axis = Vec3(1, 0, 0);
    axis.normalize();
    Eigen::AngleAxisd rot(rng.uniform(0.0, 6.28318), axis);
    Vec3 v = random_point(rng, 10.0);
    double s = rng.uniform(0.1, 5.0);
    double base = joint_angle(h, k, a);
    double moved = joint_angle(s * (rot * h) + v, s * (rot * k) + v,
                               s * (rot * a) + v);
    CHECK(std::fabs(base - moved) < 1e-9);
  }
}

TEST_CASE("joint_angle: symmetric in the two endpoints") {
  oracle::Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    Vec3 h = random_point(rng), k = random_point(rng), a = random_point(rng);
    if ((h - k).norm() < 1e-3 || (a - k).norm() < 1e-3) continue;
    CHECK(joint_angle(h, k, a) == joint_angle(a, k, h));
  }
}

TEST_CASE("compute_angle_series: straight leg gives constant 180") {
  std::vector<std::array<Vec3, kJointCount>> frames;
  for (int i = 0; i < 10; ++i) {
    auto f = blank_frame();
    f[static_cast<int>(JointId::LeftHip)] = Vec3(0, 1.0, 0);
    f[static_cast<int>(JointId::LeftKnee)] = Vec3(0, 0.5, 0);
    f[static_cast<int>(JointId::LeftAnkle)] = Vec3(0, 0.0, 0);
    frames.push_back(f);
  }
  AngleDefinition def{"left_knee_flexion", JointId::LeftKnee, JointId::LeftHip,
                      JointId::LeftAnkle, Projection::None};
  AngleSeries s = compute_angle_series(series_with(frames), def);
  REQUIRE(s.values.size() == 10);
  for (double v : s.values) CHECK(v == doctest::Approx(180.0).epsilon(1e-12));
}

TEST_CASE("compute_angle_series: single frame at 45 degrees") {
  auto f = blank_frame();
  f[static_cast<int>(JointId::LeftKnee)] = Vec3(0, 0, 0);
  f[static_cast<int>(JointId::LeftHip)] = Vec3(0, 2, 0);
  f[static_cast<int>(JointId::LeftAnkle)] = Vec3(1, 1, 0);
  AngleDefinition def{"left_knee_flexion", JointId::LeftKnee, JointId::LeftHip,
                      JointId::LeftAnkle, Projection::None};
  AngleSeries s = compute_angle_series(series_with({f}), def);
  REQUIRE(s.values.size() == 1);
  CHECK(s.values[0] == doctest::Approx(45.0).epsilon(1e-11));
}

TEST_CASE("compute_angle_series: degenerate frame index is reported") {
  std::vector<std::array<Vec3, kJointCount>> frames;
  for (int i = 0; i < 10; ++i) {
    auto f = blank_frame();
    f[static_cast<int>(JointId::LeftHip)] = Vec3(0, 1.0, 0);
    f[static_cast<int>(JointId::LeftKnee)] = Vec3(0.2, 0.5, 0);
    f[static_cast<int>(JointId::LeftAnkle)] = Vec3(0, 0.0, 0);
    frames.push_back(f);
  }
  frames[7][static_cast<int>(JointId::LeftHip)] =
      frames[7][static_cast<int>(JointId::LeftKnee)];
  AngleDefinition def{"left_knee_flexion", JointId::LeftKnee, JointId::LeftHip,
                      JointId::LeftAnkle, Projection::None};
  try {
    compute_angle_series(series_with(frames), def);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateTriangle);
    REQUIRE(e.index().has_value());
    CHECK(*e.index() == 7);
  }
}

TEST_CASE("compute_angle_series: sagittal projection drops the hip axis") {
  // Hips are split along x, so sagittal projection zeroes x. The chosen
  // points give 60 degrees in 3D but 90 degrees once projected.
  auto f = blank_frame();
  f[static_cast<int>(JointId::LeftHip)] = Vec3(0.5, 0, 0);
  f[static_cast<int>(JointId::RightHip)] = Vec3(-0.5, 0, 0);
  f[static_cast<int>(JointId::LeftKnee)] = Vec3(0, 0, 0);
  f[static_cast<int>(JointId::SpineChest)] = Vec3(1, 1, 0);
  f[static_cast<int>(JointId::Neck)] = Vec3(1, 0, 1);
  AngleDefinition flat{"a", JointId::LeftKnee, JointId::SpineChest, JointId::Neck,
                       Projection::None};
  AngleDefinition sagittal{"a", JointId::LeftKnee, JointId::SpineChest,
                           JointId::Neck, Projection::Sagittal};
  CanonicalSeries series = series_with({f});
  CHECK(compute_angle_series(series, flat).values[0] ==
        doctest::Approx(60.0).epsilon(1e-11));
  CHECK(compute_angle_series(series, sagittal).values[0] ==
        doctest::Approx(90.0).epsilon(1e-11));
}

TEST_CASE("window_statistics: hand-checked example") {
  WindowSpec spec;
  spec.length = 2;
  spec.stride = 1;
  spec.statistics = {Statistic::Mean, Statistic::Max, Statistic::Min};
  auto cols = window_statistics(make_series({10, 20, 30, 40}), spec);
  REQUIRE(cols.size() == 3);
  CHECK(cols[0].values == std::vector<double>{15, 25, 35});
  CHECK(cols[1].values == std::vector<double>{20, 30, 40});
  CHECK(cols[2].values == std::vector<double>{10, 20, 30});
}

TEST_CASE("window_statistics: whole-series window and constant series") {
  WindowSpec spec;
  spec.length = 4;
  auto cols = window_statistics(make_series({10, 20, 30, 40}), spec);
  CHECK(cols[0].values == std::vector<double>{25});
  CHECK(cols[1].values == std::vector<double>{40});
  CHECK(cols[2].values == std::vector<double>{10});

  WindowSpec small;
  small.length = 2;
  auto constant = window_statistics(make_series({7, 7, 7}), small);
  for (const auto& col : constant)
    CHECK(col.values == std::vector<double>{7, 7});
}

TEST_CASE("window_statistics: window longer than the series") {
  WindowSpec spec;
  spec.length = 5;
  try {
    window_statistics(make_series({1, 2, 3}), spec);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowTooLong);
  }
}

TEST_CASE("window_count matches a brute-force enumeration") {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(rng.uniform(0, 200));
    WindowSpec spec;
    spec.length = 1 + static_cast<std::size_t>(rng.uniform(0, static_cast<double>(n)));
    spec.stride = 1 + static_cast<std::size_t>(rng.uniform(0, 5));
    std::size_t brute = 0;
    for (std::size_t start = 0; start + spec.length <= n; start += spec.stride)
      ++brute;
    CHECK(window_count(n, spec) == brute);
  }
}

TEST_CASE("assemble_feature_matrix: columns, actions, and metadata checks") {
  std::vector<std::array<Vec3, kJointCount>> frames;
  oracle::Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    auto f = blank_frame();
    f[static_cast<int>(JointId::LeftHip)] = Vec3(0, 1.0, 0);
    f[static_cast<int>(JointId::LeftKnee)] = Vec3(0.1 + 0.01 * i, 0.5, 0);
    f[static_cast<int>(JointId::LeftAnkle)] = Vec3(0, 0.0, 0);
    frames.push_back(f);
  }
  CanonicalSeries squat = series_with(frames);
  squat.action = Action::Squat;
  CanonicalSeries sit = series_with(frames);
  sit.action = Action::SitToStand;

  std::vector<AngleDefinition> defs = {
      {"left_knee_flexion", JointId::LeftKnee, JointId::LeftHip,
       JointId::LeftAnkle, Projection::None}};
  WindowSpec spec;
  spec.length = 5;
  spec.statistics = {Statistic::Mean};

  std::vector<CanonicalSeries> recs = {squat, sit};
  FeatureMatrix m = assemble_feature_matrix(recs, defs, spec);
  REQUIRE(m.columns.size() == 1);
  CHECK(m.columns[0] == "left_knee_flexion_mean");
  CHECK(m.values.rows() == 32);  // 16 windows per recording
  CHECK(m.row_actions.size() == 32);
  std::set<Action> actions(m.row_actions.begin(), m.row_actions.end());
  CHECK(actions.size() == 2);

  SUBCASE("inconsistent metadata") {
    std::vector<CanonicalSeries> bad = {squat, sit};
    bad[1].patient_id = "p02";
    try {
      assemble_feature_matrix(bad, defs, spec);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InconsistentMetadata);
    }
  }

  SUBCASE("empty definitions") {
    std::vector<AngleDefinition> none;
    try {
      assemble_feature_matrix(recs, none, spec);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyDefinitions);
    }
  }
}

TEST_CASE("assemble_feature_matrix: column order is definition x statistic") {
  std::vector<std::array<Vec3, kJointCount>> frames(6, blank_frame());
  for (auto& f : frames) {
    f[static_cast<int>(JointId::LeftHip)] = Vec3(0, 1, 0);
    f[static_cast<int>(JointId::LeftKnee)] = Vec3(0.1, 0.5, 0);
    f[static_cast<int>(JointId::LeftAnkle)] = Vec3(0, 0, 0);
    f[static_cast<int>(JointId::RightHip)] = Vec3(0.2, 1, 0);
    f[static_cast<int>(JointId::RightKnee)] = Vec3(0.3, 0.5, 0);
    f[static_cast<int>(JointId::RightAnkle)] = Vec3(0.2, 0, 0);
  }
  CanonicalSeries rec = series_with(frames);
  std::vector<AngleDefinition> defs = {
      {"lk", JointId::LeftKnee, JointId::LeftHip, JointId::LeftAnkle,
       Projection::None},
      {"rk", JointId::RightKnee, JointId::RightHip, JointId::RightAnkle,
       Projection::None}};
  WindowSpec spec;
  spec.length = 3;
  spec.statistics = {Statistic::Max, Statistic::Mean};
  std::vector<CanonicalSeries> recs = {rec};
  FeatureMatrix m = assemble_feature_matrix(recs, defs, spec);
  REQUIRE(m.columns.size() == 4);
  CHECK(m.columns[0] == "lk_max");
  CHECK(m.columns[1] == "lk_mean");
  CHECK(m.columns[2] == "rk_max");
  CHECK(m.columns[3] == "rk_mean");
}

TEST_CASE("feature matrix CSV export") {
  testsupport::TempDir dir("fm_csv");
  std::vector<std::array<Vec3, kJointCount>> frames(8, blank_frame());
  for (auto& f : frames) {
    f[static_cast<int>(JointId::LeftHip)] = Vec3(0, 1, 0);
    f[static_cast<int>(JointId::LeftKnee)] = Vec3(0.1, 0.5, 0);
    f[static_cast<int>(JointId::LeftAnkle)] = Vec3(0, 0, 0);
  }
  CanonicalSeries rec = series_with(frames);
  std::vector<AngleDefinition> defs = {
      {"lk", JointId::LeftKnee, JointId::LeftHip, JointId::LeftAnkle,
       Projection::None}};
  WindowSpec spec;
  spec.length = 4;
  std::vector<CanonicalSeries> recs = {rec};
  FeatureMatrix m = assemble_feature_matrix(recs, defs, spec);
  auto file = dir.path() / "m.csv";
  write_feature_matrix_csv(m, file);
  std::string text = testsupport::slurp(file);
  CHECK(text.find("action,lk_mean,lk_max,lk_min") == 0);
  std::size_t lines = std::count(text.begin(), text.end(), '\n');
  CHECK(lines == 1 + static_cast<std::size_t>(m.values.rows()));
}
