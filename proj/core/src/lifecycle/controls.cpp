#include "lifeins/lifecycle/controls.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lifeins/errors.hpp"

namespace lifeins {

namespace {

double full_wealth(const StrategyCoefficients& coef, double t, double x) {
    if (!std::isfinite(x)) throw DomainError("wealth must be finite");
    return x + coef.human_capital(t);
}

}  // namespace

ControlAction to_fractions(const Allocation& alloc, double x) {
    if (!(x > 0.0)) throw DomainError("portfolio fractions need x > 0");
    ControlAction a;
    a.c = alloc.c;
    a.p = alloc.p;
    a.theta = alloc.risky / x;
    a.theta0 = 1.0 - a.theta.sum();
    return a;
}

double value_function(const StrategyCoefficients& coef, double t, double x) {
    const double y = full_wealth(coef, t, x);
    if (!(y > 0.0)) {
        std::ostringstream os;
        os << "value_function: full wealth x + b(t) = " << y << " must be > 0";
        throw DomainError(os.str());
    }
    const double g = coef.scenario().prefs.gamma;
    return coef.a(t) * std::pow(y, g) / g;
}

double optimal_consumption(const StrategyCoefficients& coef, double t, double x) {
    const double y = full_wealth(coef, t, x);
    if (y < 0.0) throw DomainError("optimal_consumption: negative full wealth");
    return y / coef.e(t);
}

double optimal_premium(const StrategyCoefficients& coef, double t, double x) {
    if (coef.variant() == Variant::NoInsurance) return 0.0;
    const double b = coef.human_capital(t);
    const double D = coef.D(t);
    return coef.scenario().insurance.ratio(std::clamp(t, 0.0, coef.horizon())) * ((D - 1.0) * x + D * b);
}

Eigen::VectorXd optimal_portfolio(const StrategyCoefficients& coef, double t, double x) {
    const double y = full_wealth(coef, t, x);
    if (!(x > 1e-9 * std::max(1.0, y))) {
        std::ostringstream os;
        os << "optimal_portfolio: wealth x = " << x << " too close to zero for fractions";
        throw DomainError(os.str());
    }
    const double g = coef.scenario().prefs.gamma;
    return y / (x * (1.0 - g)) * coef.xi_alpha(t);
}

ControlAction optimal_control(const StrategyCoefficients& coef, double t, double x) {
    ControlAction a;
    a.theta = optimal_portfolio(coef, t, x);
    a.c = optimal_consumption(coef, t, x);
    a.p = optimal_premium(coef, t, x);
    a.theta0 = 1.0 - a.theta.sum();
    return a;
}

Allocation optimal_allocation(const CoefficientsAt& c, double gamma, double x) {
    const double y = x + c.b;
    if (!(y >= 0.0)) throw DomainError("optimal_allocation: negative full wealth");
    Allocation out;
    out.c = y / c.e;
    out.p = c.variant == Variant::WithInsurance ? c.eta * (c.D * y - x) : 0.0;
    out.risky = y / (1.0 - gamma) * c.xi_alpha;
    return out;
}

Allocation optimal_allocation(const StrategyCoefficients& coef, double t, double x) {
    const CoefficientsAt c = coef.at(t);
    return optimal_allocation(c, coef.scenario().prefs.gamma, x);
}

}  // namespace lifeins
