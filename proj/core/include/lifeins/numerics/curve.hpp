#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lifeins::numerics {

enum class Interpolation {
    Constant,       ///< piecewise constant, value of the segment's left knot
    Linear,
    MonotoneCubic,  ///< Fritsch-Carlson shape-preserving Hermite cubic
    Hermite,        ///< cubic Hermite with caller-supplied knot slopes
};

/// Scalar function of time sampled on strictly increasing knots.
///
/// Evaluation outside [front(), back()] throws DomainError; a one-knot curve
/// is the constant function and is valid everywhere.
class Curve {
public:
    Curve() = default;

    static Curve constant(double value);
    static Curve step(std::vector<double> knots, std::vector<double> values);
    static Curve linear(std::vector<double> knots, std::vector<double> values);
    static Curve monotone_cubic(std::vector<double> knots, std::vector<double> values);
    static Curve hermite(std::vector<double> knots, std::vector<double> values,
                         std::vector<double> slopes);

    double operator()(double t) const;
    double derivative(double t) const;

    Interpolation interpolation() const noexcept { return interp_; }
    std::span<const double> knots() const noexcept { return knots_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> slopes() const noexcept { return slopes_; }

    bool is_constant() const noexcept { return knots_.size() == 1; }
    double front() const noexcept { return knots_.front(); }
    double back() const noexcept { return knots_.back(); }
    bool contains(double t) const noexcept;

    double min_value() const;
    double max_value() const;

private:
    Curve(Interpolation interp, std::vector<double> knots, std::vector<double> values,
          std::vector<double> slopes);

    // Index k of the segment [knots_[k], knots_[k+1]] holding t (t already clamped).
    std::size_t locate(double t) const noexcept;
    double clamp_to_domain(double t) const;

    Interpolation interp_ = Interpolation::Constant;
    std::vector<double> knots_{0.0};
    std::vector<double> values_{0.0};
    std::vector<double> slopes_;
    bool uniform_ = false;
    double inv_step_ = 0.0;
};

/// Slopes of the Fritsch-Carlson monotone cubic through (knots, values).
std::vector<double> monotone_slopes(std::span<const double> knots, std::span<const double> values);

/// n+1 equally spaced points covering [a, b], endpoints exact.
std::vector<double> uniform_grid(double a, double b, std::size_t n);

}  // namespace lifeins::numerics
