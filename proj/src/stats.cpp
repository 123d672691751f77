#include "kinemark/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kinemark/error.hpp"

namespace kinemark {

namespace {

void require_same_length(std::span<const double> x, std::span<const double> y,
                         std::size_t minimum) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch,
                "series of " + std::to_string(x.size()) + " and " +
                    std::to_string(y.size()) + " values");
  if (x.size() < minimum)
    throw Error(ErrorCode::TooFewSamples,
                "need at least " + std::to_string(minimum) + " pairs, got " +
                    std::to_string(x.size()));
}

/// Continued fraction for the incomplete beta (Lentz's method).
double betacf(double x, double a, double b) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

const char* tails_name(Tails t) { return t == Tails::One ? "one" : "two"; }

double mean(std::span<const double> xs) {
  if (xs.empty())
    throw Error(ErrorCode::TooFewSamples, "mean of an empty series");
  double sum = 0.0;
  for (double v : xs) sum += v;
  return sum / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2)
    throw Error(ErrorCode::TooFewSamples, "sample sd needs at least 2 values");
  const double mu = mean(xs);
  double ss = 0.0;
  for (double v : xs) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, 3);
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error(ErrorCode::ZeroVariance, "correlation of a constant series");
  return sxy / std::sqrt(sxx * syy);
}

double pearson_p(double r, std::size_t n) {
  if (n < 3)
    throw Error(ErrorCode::TooFewSamples, "significance of r needs n >= 3");
  if (std::fabs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = r * std::sqrt(df) / std::sqrt(1.0 - r * r);
  return 2.0 * (1.0 - t_cdf(std::fabs(t), df));
}

CorrelationResult correlation(std::span<const double> x, std::span<const double> y) {
  CorrelationResult out;
  out.r = pearson_r(x, y);
  out.n = x.size();
  out.p = pearson_p(out.r, out.n);
  return out;
}

CalibrationModel fit_calibration(std::span<const double> x,
                                 std::span<const double> y) {
  require_same_length(x, y, 3);
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0)
    throw Error(ErrorCode::ZeroVariance, "regressor is constant");

  CalibrationModel m;
  m.slope = sxy / sxx;
  m.intercept = my - m.slope * mx;

  double ss_before = 0.0, ss_after = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double raw = y[i] - x[i];
    const double fit = y[i] - (m.slope * x[i] + m.intercept);
    ss_before += raw * raw;
    ss_after += fit * fit;
  }
  m.rmse_before = std::sqrt(ss_before / static_cast<double>(x.size()));
  m.rmse_after = std::sqrt(ss_after / static_cast<double>(x.size()));
  return m;
}

std::vector<double> apply_calibration(const CalibrationModel& model,
                                      std::span<const double> x) {
  std::vector<double> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(model.slope * v + model.intercept);
  return out;
}

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw Error(ErrorCode::BadArgument, "beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  // The continued fraction converges fast for x below the distribution mean.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(x, a, b) / a;
  return 1.0 - front * betacf(1.0 - x, b, a) / b;
}

double t_cdf(double t, double df) {
  if (!(df > 0.0))
    throw Error(ErrorCode::BadArgument, "degrees of freedom must be positive");
  if (t == 0.0) return 0.5;
  const double x = df / (df + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(x, df / 2.0, 0.5);
  return t > 0.0 ? 1.0 - tail : tail;
}

double t_quantile(double p, double df) {
  if (!(p > 0.0) || !(p < 1.0))
    throw Error(ErrorCode::BadArgument, "quantile needs p strictly in (0, 1)");
  if (p == 0.5) return 0.0;

  double lo = -1.0, hi = 1.0;
  while (t_cdf(lo, df) > p) lo *= 2.0;
  while (t_cdf(hi, df) < p) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (t_cdf(mid, df) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double critical_t(double df, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw Error(ErrorCode::BadArgument, "alpha must be in (0, 1)");
  return t_quantile(1.0 - alpha, df);
}

PairedTestResult paired_t_test(std::span<const double> pre,
                               std::span<const double> post, Tails tails) {
  require_same_length(pre, post, 3);
  std::vector<double> d(pre.size());
  for (std::size_t i = 0; i < pre.size(); ++i) d[i] = post[i] - pre[i];

  const double md = mean(d);
  const double sd = sample_sd(d);
  if (sd == 0.0)
    throw Error(ErrorCode::ZeroVarianceOfDifferences,
                "all pairwise differences are identical");

  PairedTestResult r;
  r.df = d.size() - 1;
  r.tails = tails;
  r.t = md / (sd / std::sqrt(static_cast<double>(d.size())));
  const double df = static_cast<double>(r.df);
  if (tails == Tails::One) {
    r.p = 1.0 - t_cdf(r.t, df);
    r.significant = r.t > critical_t(df, 0.05);
  } else {
    r.p = 2.0 * (1.0 - t_cdf(std::fabs(r.t), df));
    r.significant = r.p < 0.05;
  }
  return r;
}

BlandAltmanSummary bland_altman(std::span<const double> pre,
                                std::span<const double> post, double multiplier) {
  require_same_length(pre, post, 2);
  BlandAltmanSummary s;
  s.multiplier = multiplier;
  s.pair_means.reserve(pre.size());
  s.pair_diffs.reserve(pre.size());
  for (std::size_t i = 0; i < pre.size(); ++i) {
    s.pair_means.push_back((pre[i] + post[i]) / 2.0);
    s.pair_diffs.push_back(post[i] - pre[i]);
  }
  s.mean_diff = mean(s.pair_diffs);
  s.sd_diff = sample_sd(s.pair_diffs);
  s.lower_limit = s.mean_diff - multiplier * s.sd_diff;
  s.upper_limit = s.mean_diff + multiplier * s.sd_diff;

  std::size_t inside = 0;
  for (double d : s.pair_diffs)
    if (d >= s.lower_limit && d <= s.upper_limit) ++inside;
  s.coverage = static_cast<double>(inside) / static_cast<double>(pre.size());
  return s;
}

}  // namespace kinemark
