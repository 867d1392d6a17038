#include "lifeins/lifecycle/income.hpp"

#include <cmath>

#include "lifeins/errors.hpp"

namespace lifeins {

IncomeProfile IncomeProfile::exponential(double i0, double growth) {
    if (!std::isfinite(i0) || !std::isfinite(growth)) throw InputError("income parameters must be finite");
    if (i0 < 0.0) throw InputError("income i0 must be >= 0");
    return IncomeProfile(ExponentialIncome{i0, growth});
}

IncomeProfile IncomeProfile::curve(numerics::Curve rate) {
    if (rate.min_value() < 0.0) throw InputError("income curve must be >= 0");
    return IncomeProfile(std::move(rate));
}

double IncomeProfile::rate(double t) const {
    if (const auto* e = std::get_if<ExponentialIncome>(&form_)) return e->i0 * std::exp(e->growth * t);
    return std::get<numerics::Curve>(form_)(t);
}

bool IncomeProfile::is_zero() const {
    if (const auto* e = std::get_if<ExponentialIncome>(&form_)) return e->i0 == 0.0;
    const auto& c = std::get<numerics::Curve>(form_);
    return c.min_value() == 0.0 && c.max_value() == 0.0;
}

}  // namespace lifeins
