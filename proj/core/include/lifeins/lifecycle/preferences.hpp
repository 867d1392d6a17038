#pragma once

namespace lifeins {

/// Discounted CRRA preferences: U(c,t) = exp(-rho t) c^gamma / gamma.
struct Preferences {
    double gamma = -3.0;  ///< gamma < 1, gamma != 0
    double rho = 0.03;    ///< subjective discount rate, 1/yr
    double T = 40.0;      ///< retirement horizon, yr

    /// Throws InputError unless gamma < 1, gamma != 0, rho > 0 and T > 0.
    void validate() const;
};

// Utility of consumption, bequest and terminal wealth. A zero argument is
// allowed: it yields 0 for gamma in (0,1) and -infinity for gamma < 0.
// Negative arguments throw DomainError.
double utility_U(const Preferences& prefs, double c, double t);
double utility_B(const Preferences& prefs, double Z, double t);
double utility_W(const Preferences& prefs, double x);

/// d/dc of exp(-rho t) c^gamma / gamma.
double marginal_utility(const Preferences& prefs, double c, double t);
/// d^2/dc^2 of exp(-rho t) c^gamma / gamma.
double utility_curvature(const Preferences& prefs, double c, double t);

}  // namespace lifeins
