#pragma once

#include <functional>
#include <span>

#include "lifeins/numerics/curve.hpp"

namespace lifeins::numerics {

/// Solves y'(t) = H(t) y(t) - K(t) backwards from y(grid.back()) = terminal
/// with classical RK4 on the given grid.
///
/// The result is a Hermite curve whose knot slopes are the ODE right-hand
/// side H y - K, so derivatives of the interpolant are consistent with the
/// equation at every knot.
Curve solve_backward_linear_ode(const std::function<double(double)>& H,
                                const std::function<double(double)>& K, double terminal,
                                std::span<const double> grid);

}  // namespace lifeins::numerics
