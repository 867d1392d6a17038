#pragma once

#include <Eigen/Dense>

#include "lifeins/lifecycle/coefficients.hpp"

namespace lifeins {

/// Consumption rate, premium rate and wealth fractions (c, p, theta).
struct ControlAction {
    double c = 0.0;         ///< $/yr, >= 0
    double p = 0.0;         ///< $/yr; negative means insurance is sold
    Eigen::VectorXd theta;  ///< fraction of wealth in each risky asset
    double theta0 = 1.0;    ///< riskless fraction, 1 - sum(theta)
};

/// The same controls with risky holdings in dollars (theta * x). Stays
/// finite as x -> 0, which the fraction form does not.
struct Allocation {
    double c = 0.0;
    double p = 0.0;
    Eigen::VectorXd risky;
};

ControlAction to_fractions(const Allocation& alloc, double x);

/// V(t,x) = a(t)/gamma * (x + b(t))^gamma. Throws DomainError if x + b <= 0.
double value_function(const StrategyCoefficients& coef, double t, double x);

/// c* = (x + b) / e. Throws DomainError if x + b < 0.
double optimal_consumption(const StrategyCoefficients& coef, double t, double x);

/// p* = eta ((D - 1) x + D b); identically 0 for the NoInsurance variant.
double optimal_premium(const StrategyCoefficients& coef, double t, double x);

/// theta* = (x + b) / (x (1 - gamma)) xi alpha. Throws DomainError when x is
/// below 1e-9 of the full-wealth scale max(1, x + b).
Eigen::VectorXd optimal_portfolio(const StrategyCoefficients& coef, double t, double x);

/// (c*, p*, theta*, theta0*) at (t, x), x > 0.
ControlAction optimal_control(const StrategyCoefficients& coef, double t, double x);

/// (c*, p*, theta* x) at (t, x); valid whenever x + b(t) >= 0, including x <= 0.
Allocation optimal_allocation(const StrategyCoefficients& coef, double t, double x);
Allocation optimal_allocation(const CoefficientsAt& c, double gamma, double x);

}  // namespace lifeins
