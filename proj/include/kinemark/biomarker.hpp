#pragma once

#include <Eigen/Core>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kinemark/kinematics.hpp"

namespace kinemark {

/// Which sessions feed a per-patient fit.
enum class SessionScope { Pre, Post, Pooled };

const char* session_scope_name(SessionScope s);

struct Standardization {
  std::vector<double> mean;
  std::vector<double> stddev;        // sample sd; 1.0 for flagged columns
  std::vector<bool> zero_variance;   // flagged, not failed
};

struct StandardizeResult {
  FeatureMatrix matrix;
  Standardization params;
};

/// Two-component PCA of a feature matrix.
struct PcaModel {
  std::vector<std::string> columns;
  Standardization standardization;
  std::array<Eigen::VectorXd, 2> components;  // orthonormal loading vectors
  std::array<double, 2> explained_variance_ratio = {0.0, 0.0};
};

struct ImportanceEntry {
  std::string feature;
  double score = 0.0;  // >= 0; scores sum to 1
};

/// Per-patient feature ranking. `action` empty means both actions pooled.
struct ImportanceRanking {
  std::vector<ImportanceEntry> entries;  // descending, ties by column order
  std::string patient_id;
  SessionScope sessions = SessionScope::Pooled;
  std::optional<Action> action;
};

struct BiomarkerHistogram {
  Action action = Action::Squat;
  std::map<std::string, int> counts;  // feature -> patients with it in top-k
};

/// Centres and scales each column to mean 0 and sample sd 1. Zero-variance
/// columns become all-zero and are flagged.
StandardizeResult standardize(const FeatureMatrix& m);

/// Standardizes, then fits the top-2 right singular vectors. Component signs
/// are fixed so each component's largest-magnitude loading is positive.
PcaModel pca_fit(const FeatureMatrix& m);

/// Explained-variance-weighted absolute loadings, normalised to sum 1.
ImportanceRanking feature_importance(const PcaModel& model);

std::vector<std::string> top_k_features(const ImportanceRanking& ranking,
                                        std::size_t k = 5);

BiomarkerHistogram aggregate_histogram(
    const std::vector<std::vector<std::string>>& per_patient_top_k, Action action);

}  // namespace kinemark
