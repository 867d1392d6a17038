#pragma once

#include <variant>

#include "lifeins/mortality.hpp"
#include "lifeins/numerics/curve.hpp"

namespace lifeins {

/// eta(t) = loading * lambda(t).
struct HazardLoading {
    double loading = 1.0;
    MortalityModel mortality;
};

/// Premium-payout ratio eta(t): paying p per unit time buys a death benefit p / eta.
class InsuranceModel {
public:
    using Form = std::variant<HazardLoading, numerics::Curve>;

    /// loading >= 1 keeps eta >= lambda (insurer does not lose money).
    static InsuranceModel hazard_loading(double loading, const MortalityModel& mortality);
    static InsuranceModel curve(numerics::Curve ratio);

    double ratio(double t) const;
    const Form& form() const noexcept { return form_; }

private:
    explicit InsuranceModel(Form f) : form_(std::move(f)) {}
    Form form_;
};

/// Estate on death: Z = x + p / eta.
double legacy_value(double x, double p, double eta);

}  // namespace lifeins
