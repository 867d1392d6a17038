#pragma once

#include <cmath>
#include <memory>

#include <Eigen/Dense>

#include "lifeins/lifecycle/coefficients.hpp"

namespace testing_support {

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline const lifeins::Scenario& figure1() {
    static const lifeins::Scenario s = lifeins::figure1_scenario();
    return s;
}

/// Shared coefficients of the reference scenario, built once per process.
inline std::shared_ptr<const lifeins::StrategyCoefficients> figure1_coefficients(
    lifeins::Variant v = lifeins::Variant::WithInsurance) {
    static const auto with =
        std::make_shared<const lifeins::StrategyCoefficients>(figure1(), lifeins::Variant::WithInsurance);
    static const auto without =
        std::make_shared<const lifeins::StrategyCoefficients>(figure1(), lifeins::Variant::NoInsurance);
    return v == lifeins::Variant::WithInsurance ? with : without;
}

/// Constant-coefficient scenario built from plain numbers.
struct SimpleScenario {
    double T = 10.0;
    double r = 0.04;
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(1, 0.07);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(1, 1, 0.2);
    lifeins::MortalityModel mortality = lifeins::MortalityModel::constant(0.02);
    double loading = 1.05;
    lifeins::IncomeProfile income = lifeins::IncomeProfile::none();
    double gamma = -3.0;
    double rho = 0.03;
    double x0 = 1e5;
    std::size_t grid_steps = 1000;

    lifeins::Scenario build() const {
        lifeins::Scenario s{lifeins::MarketModel::constant(T, r, mu, sigma),
                            mortality,
                            lifeins::InsuranceModel::hazard_loading(loading, mortality),
                            income,
                            lifeins::Preferences{gamma, rho, T},
                            x0,
                            grid_steps,
                            {}};
        s.validate();
        return s;
    }
};

}  // namespace testing_support
