#include "lifeins/lifecycle/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lifeins/errors.hpp"
#include "lifeins/numerics/ode.hpp"

namespace lifeins {

const char* to_string(Variant v) noexcept {
    return v == Variant::WithInsurance ? "with_insurance" : "no_insurance";
}

double coefficient_H(const Scenario& s, double t, Variant v) {
    const double g = s.prefs.gamma;
    const double lambda = s.mortality.hazard(t);
    const double discount = s.market.rate(t) + (v == Variant::WithInsurance ? s.insurance.ratio(t) : 0.0);
    return (lambda + s.prefs.rho) / (1.0 - g) - g * s.market.sigma_quadratic(t) / ((1.0 - g) * (1.0 - g)) -
           g / (1.0 - g) * discount;
}

double coefficient_K(const Scenario& s, double t, Variant v) {
    if (v == Variant::NoInsurance) return 1.0;
    const double g = s.prefs.gamma;
    const double lambda = s.mortality.hazard(t);
    const double eta = s.insurance.ratio(t);
    return std::exp((std::log(lambda) - g * std::log(eta)) / (1.0 - g)) + 1.0;
}

StrategyCoefficients::StrategyCoefficients(Scenario scenario, Variant variant)
    : scenario_(std::move(scenario)), variant_(variant) {
    scenario_.validate();
    const Scenario& s = scenario_;
    const auto grid = numerics::uniform_grid(0.0, s.prefs.T, s.grid_steps);

    e_ = numerics::solve_backward_linear_ode([&](double t) { return coefficient_H(s, t, variant_); },
                                             [&](double t) { return coefficient_K(s, t, variant_); }, 1.0, grid);
    b_ = numerics::solve_backward_linear_ode(
        [&](double t) {
            return s.market.rate(t) + (variant_ == Variant::WithInsurance ? s.insurance.ratio(t) : 0.0);
        },
        [&](double t) { return s.income.rate(t); }, 0.0, grid);
    if (!(e_.min_value() > 0.0)) throw AccuracyError("coefficient e(t) lost positivity");
}

void StrategyCoefficients::check_time(double t) const {
    const double T = scenario_.prefs.T;
    if (!(t >= -1e-10 * T && t <= T * (1.0 + 1e-10))) {
        std::ostringstream os;
        os << "time t=" << t << " outside [0, " << T << "]";
        throw DomainError(os.str());
    }
}

double StrategyCoefficients::human_capital(double t) const {
    check_time(t);
    return b_(t);
}

double StrategyCoefficients::human_capital_rate(double t) const {
    check_time(t);
    const double discount =
        scenario_.market.rate(t) + (variant_ == Variant::WithInsurance ? scenario_.insurance.ratio(t) : 0.0);
    return discount * b_(t) - scenario_.income.rate(t);
}

double StrategyCoefficients::e(double t) const {
    check_time(t);
    return e_(t);
}

double StrategyCoefficients::e_rate(double t) const {
    check_time(t);
    return H(t) * e_(t) - K(t);
}

double StrategyCoefficients::H(double t) const {
    check_time(t);
    return coefficient_H(scenario_, std::clamp(t, 0.0, horizon()), variant_);
}

double StrategyCoefficients::K(double t) const {
    check_time(t);
    return coefficient_K(scenario_, std::clamp(t, 0.0, horizon()), variant_);
}

double StrategyCoefficients::D(double t) const {
    if (variant_ != Variant::WithInsurance) throw std::logic_error("D(t) is only defined with insurance");
    check_time(t);
    t = std::clamp(t, 0.0, horizon());
    const double g = scenario_.prefs.gamma;
    const double ratio = scenario_.mortality.hazard(t) / scenario_.insurance.ratio(t);
    return scenario_.fault.D_scale * std::pow(ratio, 1.0 / (1.0 - g)) / e_(t);
}

double StrategyCoefficients::a(double t) const {
    check_time(t);
    return std::exp(-scenario_.prefs.rho * t) * std::pow(e_(t), 1.0 - scenario_.prefs.gamma);
}

double StrategyCoefficients::Sigma(double t) const {
    check_time(t);
    return scenario_.market.sigma_quadratic(std::clamp(t, 0.0, horizon()));
}

Eigen::VectorXd StrategyCoefficients::xi_alpha(double t) const {
    check_time(t);
    return scenario_.market.xi_alpha(std::clamp(t, 0.0, horizon()));
}

bool StrategyCoefficients::premium_bound_hypotheses() const {
    if (variant_ != Variant::WithInsurance) return false;
    for (double t : grid())
        if (!(scenario_.mortality.hazard(t) <= scenario_.insurance.ratio(t) && H(t) <= 1.0)) return false;
    return true;
}

CoefficientsAt StrategyCoefficients::at(double t) const {
    check_time(t);
    t = std::clamp(t, 0.0, horizon());
    const Scenario& s = scenario_;
    const double g = s.prefs.gamma;
    const bool insured = variant_ == Variant::WithInsurance;

    CoefficientsAt c;
    c.variant = variant_;
    c.t = t;
    c.r = s.market.rate(t);
    c.lambda = s.mortality.hazard(t);
    c.eta = s.insurance.ratio(t);
    c.income = s.income.rate(t);
    const MarketAlgebra alg = s.market.algebra(t);
    c.alpha = alg.alpha;
    c.xi_alpha = alg.xi_alpha;
    c.Sigma = alg.Sigma;

    c.b = b_(t);
    c.b_rate = (c.r + (insured ? c.eta : 0.0)) * c.b - c.income;
    c.e = e_(t);
    c.H = (c.lambda + s.prefs.rho) / (1.0 - g) - g * c.Sigma / ((1.0 - g) * (1.0 - g)) -
          g / (1.0 - g) * (c.r + (insured ? c.eta : 0.0));
    c.K = insured ? std::exp((std::log(c.lambda) - g * std::log(c.eta)) / (1.0 - g)) + 1.0 : 1.0;
    c.e_rate = c.H * c.e - c.K;
    c.D = insured ? s.fault.D_scale * std::pow(c.lambda / c.eta, 1.0 / (1.0 - g)) / c.e : 0.0;
    c.a = std::exp(-s.prefs.rho * t) * std::pow(c.e, 1.0 - g);
    c.a_rate = c.a * (-s.prefs.rho + (1.0 - g) * c.e_rate / c.e);
    return c;
}

}  // namespace lifeins
