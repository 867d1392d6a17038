#include "lifeins/lifecycle/insurance.hpp"

#include <cmath>

#include "lifeins/errors.hpp"

namespace lifeins {

InsuranceModel InsuranceModel::hazard_loading(double loading, const MortalityModel& mortality) {
    if (!(loading >= 1.0) || !std::isfinite(loading)) throw InputError("insurance loading must be >= 1");
    return InsuranceModel(HazardLoading{loading, mortality});
}

InsuranceModel InsuranceModel::curve(numerics::Curve ratio) {
    if (!(ratio.min_value() > 0.0)) throw InputError("premium-payout ratio curve must be > 0");
    return InsuranceModel(std::move(ratio));
}

double InsuranceModel::ratio(double t) const {
    if (const auto* h = std::get_if<HazardLoading>(&form_)) return h->loading * h->mortality.hazard(t);
    return std::get<numerics::Curve>(form_)(t);
}

double legacy_value(double x, double p, double eta) {
    if (!(eta > 0.0)) throw DomainError("legacy_value requires eta > 0");
    return x + p / eta;
}

}  // namespace lifeins
