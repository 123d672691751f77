#pragma once

#include <vector>

namespace kinemark {

/// A uniformly sampled scalar biomarker curve (degrees against seconds).
struct ScalarSeries {
  std::vector<double> values;
  double dt = 1.0 / 30.0;
};

struct ImpulseValue {
  double value = 0.0;  // degree-seconds, always >= 0
};

struct SmoothnessValue {
  double value = 0.0;  // degrees^2 / seconds^3, always >= 0
};

/// What the impulse integrates: the biomarker curve itself (default) or its
/// second derivative.
enum class ImpulseIntegrand { Series, SecondDerivative };

/// Second finite difference, same length as the input. Interior points use
/// the central stencil; the two endpoints reuse the stencil of their
/// nearest interior neighbour (exact on quadratics).
ScalarSeries second_derivative(const ScalarSeries& s);

/// Trapezoid rule, sum of dt*(y[i] + y[i+1])/2.
double trapezoid_integral(const ScalarSeries& s);

/// Area under the curve after subtracting its minimum.
ImpulseValue angular_impulse(const ScalarSeries& s,
                             ImpulseIntegrand integrand = ImpulseIntegrand::Series);

/// Integral of the squared second derivative; lower means smoother.
SmoothnessValue smoothness(const ScalarSeries& s);

}  // namespace kinemark
