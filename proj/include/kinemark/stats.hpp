#pragma once

#include <span>
#include <vector>

namespace kinemark {

enum class Tails { One, Two };

const char* tails_name(Tails t);

struct CorrelationResult {
  double r = 0.0;  // in [-1, 1]
  double p = 1.0;  // two-tailed significance of r
  std::size_t n = 0;
};

struct CalibrationModel {
  double slope = 1.0;
  double intercept = 0.0;
  double rmse_before = 0.0;  // y predicted by x as-is
  double rmse_after = 0.0;   // y predicted by slope*x + intercept
};

struct PairedTestResult {
  double t = 0.0;
  double p = 1.0;  // per `tails`
  std::size_t df = 1;
  Tails tails = Tails::One;
  bool significant = false;  // alpha = 0.05
};

struct BlandAltmanSummary {
  std::vector<double> pair_means;  // (pre + post)/2 per pair
  std::vector<double> pair_diffs;  // post - pre per pair
  double mean_diff = 0.0;
  double sd_diff = 0.0;
  double lower_limit = 0.0;  // mean_diff - multiplier*sd
  double upper_limit = 0.0;
  double multiplier = 1.96;
  double coverage = 1.0;  // fraction of diffs inside [lower, upper]
};

double mean(std::span<const double> xs);
/// Sample standard deviation (n-1 denominator).
double sample_sd(std::span<const double> xs);

/// Sample Pearson correlation coefficient. Requires equal lengths >= 3 and
/// both series nonconstant.
double pearson_r(std::span<const double> x, std::span<const double> y);

/// Two-tailed significance of r via the t transform with n-2 degrees of
/// freedom; |r| = 1 gives 0 as the limit case.
double pearson_p(double r, std::size_t n);

CorrelationResult correlation(std::span<const double> x, std::span<const double> y);

/// Ordinary least squares y ~ slope*x + intercept.
CalibrationModel fit_calibration(std::span<const double> x, std::span<const double> y);

std::vector<double> apply_calibration(const CalibrationModel& model,
                                      std::span<const double> x);

/// Regularised incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double x, double a, double b);

/// Student's t cumulative distribution, absolute accuracy <= 1e-10.
double t_cdf(double t, double df);

/// Inverse of t_cdf in t for fixed df.
double t_quantile(double p, double df);

/// One-tailed critical value at significance alpha.
double critical_t(double df, double alpha = 0.05);

/// Paired t on d = post - pre with sample sd. One-tailed p is the upper
/// tail of t; significance is t > critical (one) or p < 0.05 (two).
PairedTestResult paired_t_test(std::span<const double> pre,
                               std::span<const double> post,
                               Tails tails = Tails::One);

BlandAltmanSummary bland_altman(std::span<const double> pre,
                                std::span<const double> post,
                                double multiplier = 1.96);

}  // namespace kinemark
