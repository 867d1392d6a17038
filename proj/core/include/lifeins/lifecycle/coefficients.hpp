#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lifeins/lifecycle/scenario.hpp"
#include "lifeins/numerics/curve.hpp"

namespace lifeins {

enum class Variant {
    WithInsurance,  ///< premium p is a control; human capital discounted at r + eta
    NoInsurance,    ///< p = 0, no bequest motive; human capital discounted at r
};

const char* to_string(Variant v) noexcept;

/// H(t) of the e-equation e' = H e - K. The no-insurance variant drops eta.
double coefficient_H(const Scenario& s, double t, Variant v);
/// K(t) = lambda^{1/(1-gamma)} / eta^{gamma/(1-gamma)} + 1 with insurance, 1 without.
double coefficient_K(const Scenario& s, double t, Variant v);

/// Every closed-form ingredient at one instant.
struct CoefficientsAt {
    Variant variant = Variant::WithInsurance;
    double t = 0.0;
    double r = 0.0;
    double lambda = 0.0;
    double eta = 0.0;     ///< premium-payout ratio (still reported for NoInsurance)
    double income = 0.0;
    double b = 0.0;       ///< human capital
    double b_rate = 0.0;  ///< db/dt from its ODE
    double e = 0.0;
    double e_rate = 0.0;  ///< de/dt from its ODE
    double H = 0.0;
    double K = 0.0;
    double D = 0.0;       ///< 0 for NoInsurance
    double a = 0.0;
    double a_rate = 0.0;  ///< da/dt
    double Sigma = 0.0;
    Eigen::VectorXd alpha;
    Eigen::VectorXd xi_alpha;
};

/// Deterministic curves b, e (and everything derived from them) behind the
/// closed-form optimal strategy of one scenario and variant.
///
/// e and b are integrated backwards with RK4 on a uniform grid of
/// scenario.grid_steps steps and interpolated by cubic Hermite using the ODE
/// right-hand sides as knot slopes; the remaining coefficients are evaluated
/// pointwise from the models. Immutable and safe for concurrent reads.
class StrategyCoefficients {
public:
    StrategyCoefficients(Scenario scenario, Variant variant);

    const Scenario& scenario() const noexcept { return scenario_; }
    Variant variant() const noexcept { return variant_; }
    std::span<const double> grid() const noexcept { return e_.knots(); }
    double horizon() const noexcept { return scenario_.prefs.T; }

    double human_capital(double t) const;
    double human_capital_rate(double t) const;
    double e(double t) const;
    double e_rate(double t) const;
    double H(double t) const;
    double K(double t) const;
    /// Throws std::logic_error for the NoInsurance variant.
    double D(double t) const;
    double a(double t) const;
    double Sigma(double t) const;
    Eigen::VectorXd xi_alpha(double t) const;

    CoefficientsAt at(double t) const;

    /// True when lambda <= eta and H <= 1 (H taken in 1/yr) at every grid
    /// knot, the conditions under which e > 1 and D < 1 are guaranteed.
    /// Always false for the NoInsurance variant.
    bool premium_bound_hypotheses() const;

    const numerics::Curve& b_curve() const noexcept { return b_; }
    const numerics::Curve& e_curve() const noexcept { return e_; }

private:
    void check_time(double t) const;

    Scenario scenario_;
    Variant variant_;
    numerics::Curve b_;
    numerics::Curve e_;
};

}  // namespace lifeins
