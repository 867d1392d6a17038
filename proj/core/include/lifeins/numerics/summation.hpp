#pragma once

#include <cmath>
#include <span>

namespace lifeins::numerics {

/// Neumaier compensated accumulator. Once the sum overflows or meets an
/// infinity it follows plain IEEE addition.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (!std::isfinite(t)) {
            sum_ = t;
            return;
        }
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return std::isfinite(sum_) ? sum_ + comp_ : sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

}  // namespace lifeins::numerics
