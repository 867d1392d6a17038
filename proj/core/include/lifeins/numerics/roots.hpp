#pragma once

#include <functional>

namespace lifeins::numerics {

/// Bisection for a root of f on [lo, hi]; f(lo) and f(hi) must differ in sign
/// (or be zero). Stops once the bracket is narrower than abs_tol.
double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol = 1e-12);

}  // namespace lifeins::numerics
