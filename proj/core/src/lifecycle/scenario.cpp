#include "lifeins/lifecycle/scenario.hpp"

#include <cmath>
#include <sstream>

#include "lifeins/errors.hpp"

namespace lifeins {

void Scenario::validate() const {
    prefs.validate();
    if (std::abs(market.horizon() - prefs.T) > 1e-12 * prefs.T)
        throw InputError("market horizon must equal the retirement horizon T");
    if (!(x0 >= 0.0) || !std::isfinite(x0)) throw InputError("initial wealth x0 must be >= 0");
    if (grid_steps < 2) throw InputError("grid_steps must be >= 2");
    if (!(fault.D_scale > 0.0) || !std::isfinite(fault.D_scale)) throw InputError("fault D_scale must be > 0");
    const std::size_t probes = std::max<std::size_t>(grid_steps, 2);
    for (std::size_t k = 0; k <= probes; ++k) {
        const double t = prefs.T * static_cast<double>(k) / static_cast<double>(probes);
        const double i = income.rate(t);
        const double eta = insurance.ratio(t);
        if (!(i >= 0.0) || !std::isfinite(i)) {
            std::ostringstream os;
            os << "income must be finite and >= 0 (i(" << t << ") = " << i << ")";
            throw InputError(os.str());
        }
        if (!(eta > 0.0) || !std::isfinite(eta)) {
            std::ostringstream os;
            os << "premium-payout ratio must be > 0 (eta(" << t << ") = " << eta << ")";
            throw InputError(os.str());
        }
    }
}

Scenario figure1_scenario() {
    const double T = 40.0;
    Eigen::VectorXd mu(2);
    mu << 0.07, 0.11;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 0.19, 0.15, 0.17, 0.21;
    auto mortality = MortalityModel::gompertz_makeham(0.001, std::exp(-9.5), 0.1);
    Scenario s{
        MarketModel::constant(T, 0.04, mu, sigma),
        mortality,
        InsuranceModel::hazard_loading(1.05, mortality),
        IncomeProfile::exponential(50000.0, 0.03),
        Preferences{-3.0, 0.03, T},
        1e5,
        4000,
        {},
    };
    s.validate();
    return s;
}

}  // namespace lifeins
