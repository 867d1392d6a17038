#include "lifeins/lifecycle/preferences.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lifeins/errors.hpp"

namespace lifeins {

namespace {

void check_gamma(const Preferences& p) {
    if (p.gamma == 0.0) throw InputError("gamma = 0 (log utility) is not supported");
    if (!(p.gamma < 1.0) || !std::isfinite(p.gamma))
        throw InputError("risk aversion gamma must satisfy gamma < 1");
}

double crra(double gamma, double discount, double arg, const char* what) {
    if (std::isnan(arg) || arg < 0.0) {
        std::ostringstream os;
        os << what << ": argument must be >= 0 (got " << arg << ")";
        throw DomainError(os.str());
    }
    if (arg == 0.0) return gamma < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
    return discount * std::pow(arg, gamma) / gamma;
}

}  // namespace

void Preferences::validate() const {
    check_gamma(*this);
    if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError("discount rate rho must be > 0");
    if (!(T > 0.0) || !std::isfinite(T)) throw InputError("horizon T must be > 0");
}

double utility_U(const Preferences& prefs, double c, double t) {
    check_gamma(prefs);
    return crra(prefs.gamma, std::exp(-prefs.rho * t), c, "utility_U");
}

double utility_B(const Preferences& prefs, double Z, double t) {
    check_gamma(prefs);
    return crra(prefs.gamma, std::exp(-prefs.rho * t), Z, "utility_B");
}

double utility_W(const Preferences& prefs, double x) {
    check_gamma(prefs);
    return crra(prefs.gamma, std::exp(-prefs.rho * prefs.T), x, "utility_W");
}

double marginal_utility(const Preferences& prefs, double c, double t) {
    if (!(c > 0.0)) throw DomainError("marginal_utility requires c > 0");
    return std::exp(-prefs.rho * t) * std::pow(c, prefs.gamma - 1.0);
}

double utility_curvature(const Preferences& prefs, double c, double t) {
    if (!(c > 0.0)) throw DomainError("utility_curvature requires c > 0");
    return (prefs.gamma - 1.0) * std::exp(-prefs.rho * t) * std::pow(c, prefs.gamma - 2.0);
}

}  // namespace lifeins
