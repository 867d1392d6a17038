#pragma once

#include <cstddef>

#include "lifeins/lifecycle/income.hpp"
#include "lifeins/lifecycle/insurance.hpp"
#include "lifeins/lifecycle/preferences.hpp"
#include "lifeins/market.hpp"
#include "lifeins/mortality.hpp"

namespace lifeins {

/// Deliberate corruption of the closed form, used to check that verification
/// catches broken coefficients. Identity by default.
struct FaultInjection {
    double D_scale = 1.0;
};

/// Full problem instance.
struct Scenario {
    MarketModel market;
    MortalityModel mortality;
    InsuranceModel insurance;
    IncomeProfile income;
    Preferences prefs;
    double x0 = 0.0;                 ///< initial wealth, $
    std::size_t grid_steps = 4000;   ///< uniform steps for the coefficient ODEs on [0, T]
    FaultInjection fault;

    /// Throws InputError on any violated invariant.
    void validate() const;
};

/// The parameter set behind the optimal-premium surface of the reference
/// figure: N = M = 2, i(t) = 50000 e^{0.03 t}, r = 0.04, rho = 0.03,
/// gamma = -3, lambda(t) = 0.001 + e^{-9.5 + 0.1 t}, eta = 1.05 lambda,
/// mu = (0.07, 0.11), sigma = [[0.19, 0.15], [0.17, 0.21]], T = 40.
/// Initial wealth defaults to 1e5 $.
Scenario figure1_scenario();

}  // namespace lifeins
