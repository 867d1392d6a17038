#pragma once

#include <variant>

#include "lifeins/numerics/curve.hpp"

namespace lifeins {

/// i(t) = i0 * exp(growth * t), $/yr.
struct ExponentialIncome {
    double i0 = 0.0;
    double growth = 0.0;
};

/// Wage income rate received until death or retirement.
class IncomeProfile {
public:
    using Form = std::variant<ExponentialIncome, numerics::Curve>;

    static IncomeProfile exponential(double i0, double growth);
    static IncomeProfile curve(numerics::Curve rate);
    static IncomeProfile none() { return exponential(0.0, 0.0); }

    double rate(double t) const;
    bool is_zero() const;
    const Form& form() const noexcept { return form_; }

private:
    explicit IncomeProfile(Form f) : form_(std::move(f)) {}
    Form form_;
};

}  // namespace lifeins
