#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kinemark/biomarker.hpp"
#include "kinemark/ingest.hpp"
#include "kinemark/kinematics.hpp"
#include "kinemark/stats.hpp"
#include "kinemark/temporal.hpp"

namespace kinemark {

struct PipelineConfig {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  double dt = 1.0 / 30.0;
  double gap_tolerance = kDefaultGapTolerance;
  std::vector<AngleDefinition> angles = default_angle_definitions();
  WindowSpec window;
  std::size_t top_k = 5;
  Tails tails = Tails::One;
  double ba_multiplier = 1.96;
  SessionScope histogram_sessions = SessionScope::Pre;
  ImpulseIntegrand impulse_integrand = ImpulseIntegrand::Series;
  std::string analysis_source = "auto";  // "auto" or a convention name
  bool emit_svg = false;

  static PipelineConfig from_json_file(const std::filesystem::path& path);
  static PipelineConfig from_json(const std::string& text);
  std::string to_json() const;
  void to_json_file(const std::filesystem::path& path) const;
};

/// FNV-1a 64-bit hash of the canonical (sorted-key) JSON form.
std::uint64_t config_hash(const PipelineConfig& cfg);

/// A temporal descriptor collapsing one windowed-feature series per
/// recording session into a scalar.
enum class Biomarker { Impulse, Smoothness };

const char* biomarker_name(Biomarker b);

/// Identity of one tested quantity: a feature column crossed with a
/// temporal descriptor.
struct DescriptorKey {
  std::string feature;  // "<angle>_<statistic>"
  Biomarker biomarker = Biomarker::Impulse;

  bool operator<(const DescriptorKey& o) const {
    if (feature != o.feature) return feature < o.feature;
    return static_cast<int>(biomarker) < static_cast<int>(o.biomarker);
  }
};

/// Paired pre/post outcome for one descriptor. `t` is computed on
/// pre - post, so a positive t means the descriptor decreased after
/// treatment. Descriptors whose differences are all zero carry an
/// annotation instead of a result.
struct DescriptorTest {
  DescriptorKey key;
  std::size_t n = 0;
  std::optional<PairedTestResult> result;
  std::optional<std::string> annotation;  // error-code name
};

struct CalibrationRow {
  Action action = Action::Squat;
  std::string feature;
  CalibrationModel model;
  CorrelationResult correlation;
  std::size_t n = 0;
};

struct BlandAltmanRow {
  Action action = Action::Squat;
  DescriptorKey key;
  BlandAltmanSummary summary;
};

struct PatientRanking {
  std::string patient_id;
  Action action = Action::Squat;
  ImportanceRanking ranking;
  std::vector<std::string> top_features;
};

struct AnalysisReport {
  PipelineConfig config;
  std::uint64_t config_digest = 0;
  std::string analysis_source;
  std::vector<std::string> input_files;    // sorted, relative to input_dir
  std::vector<std::string> patient_ids;    // sorted
  std::vector<ImportanceRanking> pooled_rankings;  // per patient x session
  std::vector<PatientRanking> rankings;    // per patient x action
  std::map<Action, BiomarkerHistogram> histograms;
  std::map<Action, std::vector<DescriptorTest>> tests;
  std::vector<CalibrationRow> calibrations;  // empty without a second source
  std::vector<BlandAltmanRow> bland_altman;
};

/// Loads every *.jsonl under cfg.input_dir, runs all stages, writes the
/// artifact bundle under cfg.output_dir and returns the report.
AnalysisReport run_pipeline(const PipelineConfig& cfg);

/// Stage entry points, shared by run_pipeline and the CLI subcommands.
std::vector<RawRecording> load_recordings(const PipelineConfig& cfg);
std::vector<CanonicalSeries> canonicalize(const PipelineConfig& cfg,
                                          const std::vector<RawRecording>& recs);
FeatureMatrix patient_features(const PipelineConfig& cfg,
                               const std::vector<CanonicalSeries>& series,
                               const std::string& patient_id, Session session,
                               const std::string& source);

/// Deterministic plain-text summary (the t/p grid per action, histograms,
/// provenance).
std::string render_report(const AnalysisReport& report);

/// Writes report.txt, the CSV bundle and provenance.json (plus SVG plots
/// when enabled).
void write_report_bundle(const AnalysisReport& report,
                         const std::filesystem::path& out_dir);

}  // namespace kinemark
