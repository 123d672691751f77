#include "kinemark/biomarker.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kinemark/error.hpp"

namespace kinemark {

const char* session_scope_name(SessionScope s) {
  switch (s) {
    case SessionScope::Pre:    return "pre";
    case SessionScope::Post:   return "post";
    case SessionScope::Pooled: return "pooled";
  }
  return "?";
}

StandardizeResult standardize(const FeatureMatrix& m) {
  const Eigen::Index n = m.values.rows();
  const Eigen::Index d = m.values.cols();
  if (n < 2)
    throw Error(ErrorCode::TooFewSamples,
                "standardizing needs at least 2 rows, got " + std::to_string(n));

  StandardizeResult out;
  out.matrix = m;
  out.params.mean.resize(static_cast<std::size_t>(d));
  out.params.stddev.resize(static_cast<std::size_t>(d));
  out.params.zero_variance.resize(static_cast<std::size_t>(d));

  for (Eigen::Index j = 0; j < d; ++j) {
    const double mu = m.values.col(j).mean();
    double ss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dev = m.values(i, j) - mu;
      ss += dev * dev;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const bool flat = sd == 0.0;
    out.params.mean[static_cast<std::size_t>(j)] = mu;
    out.params.stddev[static_cast<std::size_t>(j)] = flat ? 1.0 : sd;
    out.params.zero_variance[static_cast<std::size_t>(j)] = flat;
    for (Eigen::Index i = 0; i < n; ++i)
      out.matrix.values(i, j) = flat ? 0.0 : (m.values(i, j) - mu) / sd;
  }
  return out;
}

PcaModel pca_fit(const FeatureMatrix& m) {
  const Eigen::Index n = m.values.rows();
  const Eigen::Index d = m.values.cols();
  if (n < 3)
    throw Error(ErrorCode::TooFewSamples,
                "PCA needs at least 3 rows, got " + std::to_string(n));
  if (d < 2)
    throw Error(ErrorCode::TooFewFeatures,
                "PCA needs at least 2 columns, got " + std::to_string(d));

  StandardizeResult sr = standardize(m);
  if (std::all_of(sr.params.zero_variance.begin(), sr.params.zero_variance.end(),
                  [](bool z) { return z; }))
    throw Error(ErrorCode::DegenerateMatrix, "every column is constant");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sr.matrix.values, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();

  PcaModel model;
  model.columns = m.columns;
  model.standardization = sr.params;

  double total = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) total += sigma[i] * sigma[i];
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd v = svd.matrixV().col(c);
    Eigen::Index peak = 0;
    v.cwiseAbs().maxCoeff(&peak);
    if (v[peak] < 0.0) v = -v;
    model.components[c] = v;
    model.explained_variance_ratio[c] =
        c < sigma.size() ? sigma[c] * sigma[c] / total : 0.0;
  }
  return model;
}

ImportanceRanking feature_importance(const PcaModel& model) {
  const std::size_t d = model.columns.size();
  std::vector<double> scores(d, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    scores[j] = model.explained_variance_ratio[0] *
                    std::fabs(model.components[0][static_cast<Eigen::Index>(j)]) +
                model.explained_variance_ratio[1] *
                    std::fabs(model.components[1][static_cast<Eigen::Index>(j)]);
    total += scores[j];
  }
  if (total > 0.0)
    for (double& s : scores) s /= total;

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  ImportanceRanking r;
  r.entries.reserve(d);
  for (std::size_t idx : order) r.entries.push_back({model.columns[idx], scores[idx]});
  return r;
}

std::vector<std::string> top_k_features(const ImportanceRanking& ranking,
                                        std::size_t k) {
  if (k == 0)
    throw Error(ErrorCode::BadArgument, "top-k needs k >= 1");
  std::vector<std::string> out;
  out.reserve(std::min(k, ranking.entries.size()));
  for (std::size_t i = 0; i < ranking.entries.size() && i < k; ++i)
    out.push_back(ranking.entries[i].feature);
  return out;
}

BiomarkerHistogram aggregate_histogram(
    const std::vector<std::vector<std::string>>& per_patient_top_k, Action action) {
  BiomarkerHistogram hist;
  hist.action = action;
  for (const auto& top : per_patient_top_k)
    for (const auto& feature : top) ++hist.counts[feature];
  return hist;
}

}  // namespace kinemark
