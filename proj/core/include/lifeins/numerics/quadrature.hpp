#pragma once

#include <functional>

namespace lifeins::numerics {

/// Adaptive Simpson quadrature of f over [a, b].
///
/// Targets |result - exact| <= tol * (1 + |result|) and throws AccuracyError
/// if an interval still fails the local test at bisection depth 40.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10);

}  // namespace lifeins::numerics
