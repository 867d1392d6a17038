#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

namespace lifeins {

/// lambda(t) = base + scale * exp(growth * t)
struct GompertzMakeham {
    double base = 0.0;
    double scale = 0.0;
    double growth = 0.0;
};

/// lambda(t) = rates[k] on [times[k], times[k+1]); the last rate extends to infinity.
struct PiecewiseConstantHazard {
    std::vector<double> times;
    std::vector<double> rates;
};

/// Deterministic hazard-rate model of the wage earner's lifetime.
///
/// Immutable after construction; every member function is const and
/// thread-safe. Times are in years, rates in 1/yr.
class MortalityModel {
public:
    using Form = std::variant<GompertzMakeham, PiecewiseConstantHazard>;

    static MortalityModel gompertz_makeham(double base, double scale, double growth);
    /// knots are (time, rate) pairs; the first time must be 0.
    static MortalityModel piecewise_constant(const std::vector<std::pair<double, double>>& knots);
    static MortalityModel constant(double rate);

    const Form& form() const noexcept { return form_; }

    double hazard(double t) const;
    /// Integral of the hazard over [t, s].
    double cumulative_hazard(double t, double s) const;
    /// P(tau >= s | tau >= t) = exp(-int_t^s lambda).
    double conditional_survival(double s, double t) const;
    /// Density of tau at s given survival to t: lambda(s) * survival(s, t).
    double conditional_density(double s, double t) const;

    /// Death time tau > t0 by inversion of the cumulative hazard; deterministic in seed.
    double sample_death_time(double t0, std::uint64_t seed) const;
    /// Inversion for a caller-supplied uniform u in (0, 1): solves
    /// cumulative_hazard(t0, tau) = -log(u) by bisection to 1e-12 yr.
    double death_time_from_uniform(double t0, double u) const;

private:
    explicit MortalityModel(Form form) : form_(std::move(form)) {}
    Form form_;
};

}  // namespace lifeins
