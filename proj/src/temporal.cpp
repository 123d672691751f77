#include "kinemark/temporal.hpp"

#include <algorithm>
#include <string>

#include "kinemark/error.hpp"

namespace kinemark {

namespace {

void require_samples(const ScalarSeries& s, std::size_t minimum) {
  if (s.values.size() < minimum)
    throw Error(ErrorCode::TooFewSamples,
                "series has " + std::to_string(s.values.size()) +
                    " samples, need at least " + std::to_string(minimum));
  if (!(s.dt > 0.0))
    throw Error(ErrorCode::BadSampleInterval, "dt must be positive");
}

double min_subtracted_trapezoid(const ScalarSeries& s) {
  const double floor = *std::min_element(s.values.begin(), s.values.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < s.values.size(); ++i)
    sum += s.dt * ((s.values[i] - floor) + (s.values[i + 1] - floor)) / 2.0;
  return sum;
}

}  // namespace

ScalarSeries second_derivative(const ScalarSeries& s) {
  require_samples(s, 3);
  const auto& y = s.values;
  const std::size_t n = y.size();

  ScalarSeries out;
  out.dt = s.dt;
  out.values.resize(n);
  // Difference of first differences keeps the stencil exact for values that
  // share a dyadic grid.
  for (std::size_t i = 1; i + 1 < n; ++i)
    out.values[i] = ((y[i + 1] - y[i]) - (y[i] - y[i - 1])) / (s.dt * s.dt);
  out.values[0] = out.values[1];
  out.values[n - 1] = out.values[n - 2];
  return out;
}

double trapezoid_integral(const ScalarSeries& s) {
  require_samples(s, 2);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < s.values.size(); ++i)
    sum += s.dt * (s.values[i] + s.values[i + 1]) / 2.0;
  return sum;
}

ImpulseValue angular_impulse(const ScalarSeries& s, ImpulseIntegrand integrand) {
  if (integrand == ImpulseIntegrand::SecondDerivative) {
    ScalarSeries d2 = second_derivative(s);
    return {min_subtracted_trapezoid(d2)};
  }
  require_samples(s, 2);
  return {min_subtracted_trapezoid(s)};
}

SmoothnessValue smoothness(const ScalarSeries& s) {
  ScalarSeries d2 = second_derivative(s);
  for (double& v : d2.values) v = v * v;
  return {trapezoid_integral(d2)};
}

}  // namespace kinemark
