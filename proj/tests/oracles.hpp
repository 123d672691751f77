#pragma once

// Independent reference implementations used only by tests. These
// deliberately avoid the library's code paths (and Eigen) so that every
// derived expectation is checked through a second route.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

// xorshift64* generator, unrelated to the library's fixture RNG.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dull;
  }

  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

struct Vec {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec sub(const Vec& a, const Vec& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

// Angle at k between rays towards h and a: arccos(m.n / (|m||n|)), degrees.
inline double angle_deg(const Vec& h, const Vec& k, const Vec& a) {
  Vec m = sub(h, k);
  Vec n = sub(a, k);
  double c = dot(m, n) / (norm(m) * norm(n));
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c) * 180.0 / std::numbers::pi;
}

using Matrix = std::vector<std::vector<double>>;

// Sample covariance (n-1) of the columns of data (rows = observations).
inline Matrix covariance(const Matrix& data) {
  std::size_t n = data.size();
  std::size_t d = data[0].size();
  std::vector<double> mu(d, 0.0);
  for (const auto& row : data)
    for (std::size_t j = 0; j < d; ++j) mu[j] += row[j];
  for (auto& m : mu) m /= static_cast<double>(n);
  Matrix cov(d, std::vector<double>(d, 0.0));
  for (const auto& row : data)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        cov[i][j] += (row[i] - mu[i]) * (row[j] - mu[j]);
  for (auto& r : cov)
    for (auto& v : r) v /= static_cast<double>(n - 1);
  return cov;
}

struct EigResult {
  std::vector<double> values;   // descending
  Matrix vectors;               // vectors[i] is the i-th eigenvector
};

// Cyclic Jacobi eigendecomposition for symmetric matrices.
inline EigResult jacobi_eigen(Matrix a) {
  std::size_t n = a.size();
  Matrix v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a[order[j]][order[j]] > a[order[i]][order[i]]) std::swap(order[i], order[j]);

  EigResult out;
  out.values.resize(n);
  out.vectors.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = a[order[i]][order[i]];
    for (std::size_t k = 0; k < n; ++k) out.vectors[i][k] = v[k][order[i]];
  }
  return out;
}

// Student's t CDF closed forms for the two analytic degrees of freedom.
inline double t_cdf_df1(double t) {
  return 0.5 + std::atan(t) / std::numbers::pi;
}

inline double t_cdf_df2(double t) {
  return 0.5 + t / (2.0 * std::sqrt(t * t + 2.0));
}

}  // namespace oracle
